#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "fsolink/dynamics.hpp"
#include "fsolink/errors.hpp"
#include "fsolink/rng.hpp"

using namespace fsolink::dynamics;
using doctest::Approx;

namespace {

double rms(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("disturbance") {
    auto rng = fsolink::derive_stream(1, "test");
    CHECK(disturbance_sample({}, 1.3, rng) == TwoAxis{});

    DisturbanceProfile sine;
    sine.pitch.sinusoids = {{50e-6, 0.5, 0.0}};
    CHECK(disturbance_sample(sine, 1.0 / (4.0 * 0.5), rng).pitch == Approx(50e-6));

    SUBCASE("noise rms") {
        for (double bw : {0.0, 1.0, 20.0}) {
            DisturbanceProfile p;
            p.pitch.noise_rms_rad = 10e-6;
            p.pitch.noise_bandwidth_hz = bw;
            p.azimuth.noise_rms_rad = 4e-6;
            p.azimuth.noise_bandwidth_hz = bw;
            DisturbanceSource src(p);
            auto r = fsolink::derive_stream(7, fsolink::stream::kDisturbance);
            std::vector<double> pitch, az;
            // Long enough that even the 1 Hz band has many correlation times.
            const int n = bw == 1.0 ? 2000000 : 100000;
            for (int i = 0; i < n; ++i) {
                const auto s = src.sample(i * 1e-3, r);
                pitch.push_back(s.pitch);
                az.push_back(s.azimuth);
            }
            CHECK(rms(pitch) == Approx(10e-6).epsilon(0.05));
            CHECK(rms(az) == Approx(4e-6).epsilon(0.05));
        }
    }
    SUBCASE("drift") {
        DisturbanceProfile p;
        p.azimuth.drift_rate_rad_s = 1e-4;
        CHECK(disturbance_sample(p, 2.0, rng).azimuth == Approx(2e-4));
    }
    SUBCASE("validation") {
        DisturbanceProfile p;
        p.pitch.noise_rms_rad = -1.0;
        CHECK_THROWS_AS(p.validate(), fsolink::ValidationError);
    }
}

TEST_CASE("gimbal") {
    const GimbalSpec spec;
    const GimbalState at{{0.1, -0.2}, {}};
    CHECK(gimbal_step(at, spec, at.angle, 1e-3).angle == at.angle);

    SUBCASE("saturates at the travel limit") {
        GimbalState s;
        for (int i = 0; i < 10000; ++i) {
            s = gimbal_step(s, spec, {5.0, 5.0}, 1e-3);
            CHECK(s.angle.azimuth <= std::numbers::pi / 2.0);
            CHECK(s.angle.pitch <= std::numbers::pi / 3.0);
        }
        CHECK(s.angle.azimuth == Approx(std::numbers::pi / 2.0));
        CHECK(s.angle.pitch == Approx(std::numbers::pi / 3.0));
    }
    SUBCASE("63% step response after one time constant") {
        const double dt = 1e-4;
        const double tau = 1.0 / (2.0 * std::numbers::pi * spec.bandwidth_hz);
        GimbalState s;
        const int n = static_cast<int>(std::lround(tau / dt));
        for (int i = 0; i < n; ++i) {
            s = gimbal_step(s, spec, {1e-3, 0.0}, dt);
        }
        CHECK(s.angle.pitch / 1e-3 == Approx(1.0 - std::exp(-1.0)).epsilon(0.05));
    }
    SUBCASE("rate limit") {
        GimbalState s;
        s = gimbal_step(s, spec, {1.0, 0.0}, 1e-3);
        CHECK(s.angle.pitch <= spec.max_rate_rad_s * 1e-3 + 1e-15);
    }
}

TEST_CASE("fast steering mirror") {
    const FsmSpec spec;
    CHECK(fsm_step({}, spec, {}, 1e-3).deflection == TwoAxis{});
    CHECK(clamp_to_range(spec, {500e-6, 0.0}) == TwoAxis{212e-6, 0.0});
    CHECK(clamp_to_range(spec, {-1.0, 3e-5}) == TwoAxis{-212e-6, 3e-5});

    SUBCASE("63% step response") {
        const double dt = 1e-5;
        const double tau = 1.0 / (2.0 * std::numbers::pi * spec.bandwidth_hz);
        FsmState s;
        const int n = static_cast<int>(std::lround(tau / dt));
        for (int i = 0; i < n; ++i) {
            s = fsm_step(s, spec, {0.0, 100e-6}, dt);
        }
        CHECK(s.deflection.azimuth / 100e-6 == Approx(1.0 - std::exp(-1.0)).epsilon(0.05));
    }
}

TEST_CASE("beacon visibility") {
    const BeaconSpec bl0{940e-9, 35e-3, 1.0};
    const BeaconSpec bl1{638e-9, 6e-3, 5e-3};
    CHECK(beacon_visible(bl0, 10e-3));
    CHECK_FALSE(beacon_visible(bl1, 10e-3));
    CHECK(beacon_visible(bl1, 3e-3));
    CHECK_FALSE(beacon_visible(bl1, std::nextafter(3e-3, 1.0)));
}

TEST_CASE("CMOS measurement") {
    const CmosSpec fine{13e-3, 10e-3, 288, 288, 1000.0, 0.0};
    auto rng = fsolink::derive_stream(2, "test");
    CHECK_FALSE(cmos_measure(fine, 0.03, 0.0, true, 0.0, rng).valid);
    CHECK_FALSE(cmos_measure(fine, 0.0, 0.0, false, 0.0, rng).valid);
    const auto zero = cmos_measure(fine, 0.0, 0.0, true, 0.25, rng);
    CHECK(zero.valid);
    CHECK(zero.offset() == TwoAxis{});
    CHECK(zero.timestamp_s == 0.25);

    SUBCASE("noise-free output is a whole number of pixels") {
        std::mt19937_64 g(5);
        std::uniform_real_distribution<double> u(-4e-3, 4e-3);
        for (int i = 0; i < 1000; ++i) {
            const auto f = cmos_measure(fine, u(g), u(g), true, 0.0, rng);
            REQUIRE(f.valid);
            const double kp = f.offset_pitch_rad / fine.pixel_pitch_rad();
            const double ka = f.offset_azimuth_rad / fine.pixel_azimuth_rad();
            CHECK(std::abs(kp - std::round(kp)) < 1e-9);
            CHECK(std::abs(ka - std::round(ka)) < 1e-9);
        }
    }
    SUBCASE("valid frames stay inside the field of view") {
        CmosSpec noisy = fine;
        noisy.centroid_noise_rms_rad = 1e-3;
        std::mt19937_64 g(6);
        std::uniform_real_distribution<double> u(-7e-3, 7e-3);
        for (int i = 0; i < 20000; ++i) {
            const auto f = cmos_measure(noisy, u(g), u(g), true, 0.0, rng);
            if (f.valid) {
                CHECK(std::abs(f.offset_pitch_rad) <= noisy.fov_pitch_rad / 2.0);
                CHECK(std::abs(f.offset_azimuth_rad) <= noisy.fov_azimuth_rad / 2.0);
            }
        }
    }
    SUBCASE("noise rms") {
        // Fine pixels so quantization adds little variance.
        const CmosSpec spec{1e-3, 1e-3, 2000, 2000, 1000.0, 20e-6};
        std::vector<double> p;
        for (int i = 0; i < 100000; ++i) {
            p.push_back(cmos_measure(spec, 0.0, 0.0, true, 0.0, rng).offset_pitch_rad);
        }
        const double expected = std::sqrt(20e-6 * 20e-6 + spec.pixel_pitch_rad() * spec.pixel_pitch_rad() / 12.0);
        CHECK(rms(p) == Approx(expected).epsilon(0.05));
    }
}

TEST_CASE("IMU") {
    auto rng = fsolink::derive_stream(4, "test");
    const ImuSpec clean;
    CHECK(imu_measure(clean, 0.0, rng) == 0.0);
    CHECK(imu_measure(clean, 0.37, rng) == 0.37);
    ImuSpec noisy;
    noisy.rate_noise_rms_rad_s = 1e-3;
    std::vector<double> v;
    for (int i = 0; i < 100000; ++i) {
        v.push_back(imu_measure(noisy, 0.0, rng));
    }
    CHECK(rms(v) == Approx(1e-3).epsilon(0.05));
}
