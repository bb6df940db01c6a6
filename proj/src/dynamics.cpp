#include "fsolink/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "fsolink/errors.hpp"

namespace fsolink::dynamics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

void validate_axis(const AxisDisturbance& axis, const std::string& field) {
    for (std::size_t i = 0; i < axis.sinusoids.size(); ++i) {
        const auto& s = axis.sinusoids[i];
        const std::string f = field + ".sinusoids[" + std::to_string(i) + "]";
        if (!finite_nonnegative(s.amplitude_rad)) {
            throw ValidationError(f + ".amplitude_rad", "must be >= 0");
        }
        if (!finite_positive(s.frequency_hz)) {
            throw ValidationError(f + ".frequency_hz", "must be > 0");
        }
        if (!std::isfinite(s.phase_rad)) {
            throw ValidationError(f + ".phase_rad", "must be finite");
        }
    }
    if (!finite_nonnegative(axis.noise_rms_rad)) {
        throw ValidationError(field + ".noise_rms_rad", "must be >= 0");
    }
    if (!finite_nonnegative(axis.noise_bandwidth_hz)) {
        throw ValidationError(field + ".noise_bandwidth_hz", "must be >= 0");
    }
    if (!std::isfinite(axis.drift_rate_rad_s)) {
        throw ValidationError(field + ".drift_rate_rad_s", "must be finite");
    }
}

double deterministic_part(const AxisDisturbance& axis, double t_s) {
    double v = axis.drift_rate_rad_s * t_s;
    for (const auto& s : axis.sinusoids) {
        v += s.amplitude_rad * std::sin(kTwoPi * s.frequency_hz * t_s + s.phase_rad);
    }
    return v;
}

// One step of a first-order lag with time constant 1/(2 pi bandwidth).
double lag_toward(double current, double command, double bandwidth_hz, double dt_s) {
    const double decay = std::exp(-kTwoPi * bandwidth_hz * dt_s);
    return command + (current - command) * decay;
}

double quantize(double value, double pixel, int half_pixels, double half_fov) {
    const double k = std::clamp(std::round(value / pixel), -static_cast<double>(half_pixels),
                                static_cast<double>(half_pixels));
    return std::clamp(k * pixel, -half_fov, half_fov);
}

}  // namespace

double TwoAxis::norm() const { return std::hypot(pitch, azimuth); }

void DisturbanceProfile::validate(const std::string& field) const {
    validate_axis(pitch, field + ".pitch");
    validate_axis(azimuth, field + ".azimuth");
}

DisturbanceSource::DisturbanceSource(DisturbanceProfile profile) : profile_(std::move(profile)) {}

double DisturbanceSource::sample_axis(const AxisDisturbance& axis, double& state, double t_s, Rng& rng) const {
    // Always consume one draw per axis so the stream position depends only
    // on the number of samples taken.
    const double white = gaussian(rng, 1.0);
    if (axis.noise_rms_rad > 0.0) {
        if (!primed_ || axis.noise_bandwidth_hz <= 0.0) {
            state = axis.noise_rms_rad * white;
        } else {
            const double a = std::exp(-kTwoPi * axis.noise_bandwidth_hz * (t_s - last_t_));
            state = a * state + std::sqrt(std::max(0.0, 1.0 - a * a)) * axis.noise_rms_rad * white;
        }
    } else {
        state = 0.0;
    }
    return deterministic_part(axis, t_s) + state;
}

TwoAxis DisturbanceSource::sample(double t_s, Rng& rng) {
    TwoAxis out;
    out.pitch = sample_axis(profile_.pitch, pitch_noise_, t_s, rng);
    out.azimuth = sample_axis(profile_.azimuth, azimuth_noise_, t_s, rng);
    last_t_ = t_s;
    primed_ = true;
    return out;
}

TwoAxis disturbance_sample(const DisturbanceProfile& profile, double t_s, Rng& rng) {
    DisturbanceSource source(profile);
    return source.sample(t_s, rng);
}

void GimbalSpec::validate(const std::string& field) const {
    if (!finite_positive(azimuth_range_rad) || azimuth_range_rad > std::numbers::pi) {
        throw ValidationError(field + ".azimuth_range_rad", "must lie in (0, pi]");
    }
    if (!finite_positive(pitch_range_rad) || pitch_range_rad > std::numbers::pi / 2.0) {
        throw ValidationError(field + ".pitch_range_rad", "must lie in (0, pi/2]");
    }
    if (!finite_positive(max_rate_rad_s)) {
        throw ValidationError(field + ".max_rate_rad_s", "must be > 0");
    }
    if (!finite_positive(bandwidth_hz)) {
        throw ValidationError(field + ".bandwidth_hz", "must be > 0");
    }
}

GimbalState gimbal_step(const GimbalState& state, const GimbalSpec& spec, TwoAxis command, double dt_s) {
    auto axis = [&](double x, double cmd, double range) {
        const double target = lag_toward(x, cmd, spec.bandwidth_hz, dt_s);
        const double rate = std::clamp((target - x) / dt_s, -spec.max_rate_rad_s, spec.max_rate_rad_s);
        return std::clamp(x + rate * dt_s, -range, range);
    };
    GimbalState next;
    next.angle.pitch = axis(state.angle.pitch, command.pitch, spec.pitch_range_rad);
    next.angle.azimuth = axis(state.angle.azimuth, command.azimuth, spec.azimuth_range_rad);
    next.rate = (1.0 / dt_s) * (next.angle - state.angle);
    return next;
}

void FsmSpec::validate(const std::string& field) const {
    if (!finite_positive(range_rad)) {
        throw ValidationError(field + ".range_rad", "must be > 0");
    }
    if (!finite_positive(bandwidth_hz)) {
        throw ValidationError(field + ".bandwidth_hz", "must be > 0");
    }
}

TwoAxis clamp_to_range(const FsmSpec& spec, TwoAxis command) {
    return {std::clamp(command.pitch, -spec.range_rad, spec.range_rad),
            std::clamp(command.azimuth, -spec.range_rad, spec.range_rad)};
}

FsmState fsm_step(const FsmState& state, const FsmSpec& spec, TwoAxis command, double dt_s) {
    const TwoAxis cmd = clamp_to_range(spec, command);
    const TwoAxis next{lag_toward(state.deflection.pitch, cmd.pitch, spec.bandwidth_hz, dt_s),
                       lag_toward(state.deflection.azimuth, cmd.azimuth, spec.bandwidth_hz, dt_s)};
    return {clamp_to_range(spec, next)};
}

void BeaconSpec::validate(const std::string& field) const {
    if (!finite_positive(wavelength_m)) {
        throw ValidationError(field + ".wavelength_m", "must be > 0");
    }
    if (!finite_positive(full_divergence_rad)) {
        throw ValidationError(field + ".full_divergence_rad", "must be > 0");
    }
    if (!finite_positive(power_w)) {
        throw ValidationError(field + ".power_w", "must be > 0");
    }
}

bool beacon_visible(const BeaconSpec& beacon, double transmitter_pointing_error_rad) {
    return transmitter_pointing_error_rad <= 0.5 * beacon.full_divergence_rad;
}

void CmosSpec::validate(const std::string& field) const {
    if (!finite_positive(fov_pitch_rad)) {
        throw ValidationError(field + ".fov_pitch_rad", "must be > 0");
    }
    if (!finite_positive(fov_azimuth_rad)) {
        throw ValidationError(field + ".fov_azimuth_rad", "must be > 0");
    }
    if (pixels_pitch <= 0 || pixels_azimuth <= 0) {
        throw ValidationError(field + ".pixels", "must be > 0");
    }
    if (!finite_positive(frame_rate_hz)) {
        throw ValidationError(field + ".frame_rate_hz", "must be > 0");
    }
    if (!finite_nonnegative(centroid_noise_rms_rad)) {
        throw ValidationError(field + ".centroid_noise_rms_rad", "must be >= 0");
    }
}

SensorFrame cmos_measure(const CmosSpec& spec, double true_offset_pitch_rad, double true_offset_azimuth_rad,
                         bool beacon_seen, double t_s, Rng& rng) {
    const double half_p = 0.5 * spec.fov_pitch_rad;
    const double half_a = 0.5 * spec.fov_azimuth_rad;
    const double noisy_p = true_offset_pitch_rad + gaussian(rng, spec.centroid_noise_rms_rad);
    const double noisy_a = true_offset_azimuth_rad + gaussian(rng, spec.centroid_noise_rms_rad);

    SensorFrame frame;
    frame.timestamp_s = t_s;
    const bool in_fov = std::abs(true_offset_pitch_rad) <= half_p && std::abs(true_offset_azimuth_rad) <= half_a &&
                        std::abs(noisy_p) <= half_p && std::abs(noisy_a) <= half_a;
    if (!beacon_seen || !in_fov) {
        return frame;
    }
    frame.valid = true;
    frame.offset_pitch_rad = quantize(noisy_p, spec.pixel_pitch_rad(), spec.pixels_pitch / 2, half_p);
    frame.offset_azimuth_rad = quantize(noisy_a, spec.pixel_azimuth_rad(), spec.pixels_azimuth / 2, half_a);
    return frame;
}

void ImuSpec::validate(const std::string& field) const {
    if (!finite_nonnegative(rate_noise_rms_rad_s)) {
        throw ValidationError(field + ".rate_noise_rms_rad_s", "must be >= 0");
    }
    if (!finite_positive(sample_rate_hz)) {
        throw ValidationError(field + ".sample_rate_hz", "must be > 0");
    }
}

double imu_measure(const ImuSpec& spec, double true_base_rate_rad_s, Rng& rng) {
    return true_base_rate_rad_s + gaussian(rng, spec.rate_noise_rms_rad_s);
}

TwoAxis imu_measure(const ImuSpec& spec, TwoAxis true_base_rate_rad_s, Rng& rng) {
    const double p = imu_measure(spec, true_base_rate_rad_s.pitch, rng);
    const double a = imu_measure(spec, true_base_rate_rad_s.azimuth, rng);
    return {p, a};
}

}  // namespace fsolink::dynamics
