#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fsolink {

using Rng = std::mt19937_64;

// Stream labels used by the simulator. Each component draws from its own
// generator so adding a component leaves the others untouched.
namespace stream {
inline constexpr std::string_view kDisturbance = "disturbance";
inline constexpr std::string_view kImu = "imu";
inline constexpr std::string_view kCmosCoarse = "cmos0";
inline constexpr std::string_view kCmosFine1 = "cmos1";
inline constexpr std::string_view kCmosFine2 = "cmos2";
inline constexpr std::string_view kCalibration = "calibration";
}  // namespace stream

constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Generator for component `label` under the run seed `seed`.
inline Rng derive_stream(std::uint64_t seed, std::string_view label) {
    return Rng(splitmix64(seed ^ fnv1a64(label)));
}

/// Zero-mean Gaussian draw with standard deviation `sigma`. Returns 0
/// without consuming randomness when sigma is 0.
inline double gaussian(Rng& rng, double sigma) {
    if (sigma == 0.0) {
        return 0.0;
    }
    std::normal_distribution<double> dist(0.0, sigma);
    return dist(rng);
}

}  // namespace fsolink
