#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "fsolink/rng.hpp"

namespace fsolink::dynamics {

/// A (pitch, azimuth) pair of angles or angular rates.
struct TwoAxis {
    double pitch = 0.0;
    double azimuth = 0.0;

    friend TwoAxis operator+(TwoAxis a, TwoAxis b) { return {a.pitch + b.pitch, a.azimuth + b.azimuth}; }
    friend TwoAxis operator-(TwoAxis a, TwoAxis b) { return {a.pitch - b.pitch, a.azimuth - b.azimuth}; }
    friend TwoAxis operator*(double k, TwoAxis a) { return {k * a.pitch, k * a.azimuth}; }
    friend bool operator==(const TwoAxis&, const TwoAxis&) = default;

    double norm() const;
};

// ---------------------------------------------------------------------------
// Platform disturbance
// ---------------------------------------------------------------------------

struct SinusoidComponent {
    double amplitude_rad = 0.0;
    double frequency_hz = 1.0;
    double phase_rad = 0.0;
};

struct AxisDisturbance {
    std::vector<SinusoidComponent> sinusoids;
    double noise_rms_rad = 0.0;
    double noise_bandwidth_hz = 0.0;  ///< 0 = white at the sample rate
    double drift_rate_rad_s = 0.0;    ///< constant base rotation
};

struct DisturbanceProfile {
    AxisDisturbance pitch;
    AxisDisturbance azimuth;

    void validate(const std::string& field = "disturbance") const;
};

/// Samples base-platform angular motion. The noise term is first-order
/// low-pass filtered white noise whose stationary rms equals
/// `noise_rms_rad`; it carries filter state between calls, so samples must
/// be requested in nondecreasing time order.
class DisturbanceSource {
public:
    explicit DisturbanceSource(DisturbanceProfile profile);

    TwoAxis sample(double t_s, Rng& rng);

private:
    double sample_axis(const AxisDisturbance& axis, double& state, double t_s, Rng& rng) const;

    DisturbanceProfile profile_;
    double pitch_noise_ = 0.0;
    double azimuth_noise_ = 0.0;
    double last_t_ = 0.0;
    bool primed_ = false;
};

/// Single draw from a fresh source: sinusoids at t plus one stationary
/// noise sample.
TwoAxis disturbance_sample(const DisturbanceProfile& profile, double t_s, Rng& rng);

// ---------------------------------------------------------------------------
// Actuators
// ---------------------------------------------------------------------------

struct GimbalSpec {
    double azimuth_range_rad = std::numbers::pi / 2.0;
    double pitch_range_rad = std::numbers::pi / 3.0;
    double max_rate_rad_s = 1.0;
    double bandwidth_hz = 20.0;

    void validate(const std::string& field = "gimbal") const;
};

struct GimbalState {
    TwoAxis angle;
    TwoAxis rate;
};

/// First-order lag toward `command` with rate and range saturation.
GimbalState gimbal_step(const GimbalState& state, const GimbalSpec& spec, TwoAxis command, double dt_s);

struct FsmSpec {
    double range_rad = 212e-6;  ///< symmetric, per axis
    double bandwidth_hz = 300.0;

    void validate(const std::string& field = "fsm") const;
};

struct FsmState {
    TwoAxis deflection;
};

/// Clamps a tip/tilt command to the mirror range.
TwoAxis clamp_to_range(const FsmSpec& spec, TwoAxis command);

FsmState fsm_step(const FsmState& state, const FsmSpec& spec, TwoAxis command, double dt_s);

// ---------------------------------------------------------------------------
// Sensors and beacons
// ---------------------------------------------------------------------------

struct BeaconSpec {
    double wavelength_m = 940e-9;
    double full_divergence_rad = 35e-3;
    double power_w = 1.0;

    void validate(const std::string& field = "beacon") const;
};

/// True when the receiver sits inside the beacon cone (boundary inclusive).
bool beacon_visible(const BeaconSpec& beacon, double transmitter_pointing_error_rad);

struct CmosSpec {
    double fov_pitch_rad = 0.04;
    double fov_azimuth_rad = 0.04;
    int pixels_pitch = 288;
    int pixels_azimuth = 288;
    double frame_rate_hz = 1000.0;
    double centroid_noise_rms_rad = 0.0;

    double pixel_pitch_rad() const { return fov_pitch_rad / pixels_pitch; }
    double pixel_azimuth_rad() const { return fov_azimuth_rad / pixels_azimuth; }
    void validate(const std::string& field = "cmos") const;
};

/// Abstracted beacon-spot centroid.
struct SensorFrame {
    double timestamp_s = 0.0;
    double offset_pitch_rad = 0.0;
    double offset_azimuth_rad = 0.0;
    bool valid = false;

    TwoAxis offset() const { return {offset_pitch_rad, offset_azimuth_rad}; }
};

/// Noisy, pixel-quantized centroid of the beacon spot. Invalid when the
/// beacon is not seen or the spot (true or measured) leaves the field of
/// view. Quantization rounds half away from zero.
SensorFrame cmos_measure(const CmosSpec& spec, double true_offset_pitch_rad, double true_offset_azimuth_rad,
                         bool beacon_seen, double t_s, Rng& rng);

struct ImuSpec {
    double rate_noise_rms_rad_s = 0.0;
    double sample_rate_hz = 1000.0;

    void validate(const std::string& field = "imu") const;
};

double imu_measure(const ImuSpec& spec, double true_base_rate_rad_s, Rng& rng);
TwoAxis imu_measure(const ImuSpec& spec, TwoAxis true_base_rate_rad_s, Rng& rng);

}  // namespace fsolink::dynamics
