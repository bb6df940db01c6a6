#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsolink/dynamics.hpp"

namespace fsolink {
struct Scenario;
}

namespace fsolink::apt {

using dynamics::TwoAxis;

enum class AptState : std::uint8_t {
    Stabilize,
    Acquire,
    CoarseTrack,
    FineTrack1,
    FineTrack2,
    Linked,
    Reacquire,
};

inline constexpr std::array<AptState, 7> kAllStates = {
    AptState::Stabilize,  AptState::Acquire,    AptState::CoarseTrack, AptState::FineTrack1,
    AptState::FineTrack2, AptState::Linked,     AptState::Reacquire,
};

std::string_view to_string(AptState s);
std::optional<AptState> parse_state(std::string_view name);

/// States in which the coarse beacon is held and the data link is usable.
bool is_tracking(AptState s);

/// True for the edges (and self loops) the state machine may take.
bool is_allowed_edge(AptState from, AptState to);

// ---------------------------------------------------------------------------
// PID
// ---------------------------------------------------------------------------

struct ControllerGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double windup_limit = 1.0;  ///< bound on |integral of error| (rad s)

    void validate(const std::string& field = "gains") const;
};

struct PidResult {
    double command = 0.0;
    double integrator = 0.0;
    double previous_error = 0.0;
};

/// command = kp e + ki clamp(I + e dt) + kd (e - e_prev) / dt.
PidResult pid_step(const ControllerGains& gains, double error, double integrator, double previous_error,
                   double dt_s);

/// Two independent per-axis PID channels sharing one gain set.
class AxisPairPid {
public:
    TwoAxis step(const ControllerGains& gains, TwoAxis error, double dt_s);
    void reset() { *this = AxisPairPid{}; }
    TwoAxis integrator() const { return {pitch_.integrator, azimuth_.integrator}; }
    TwoAxis last_command() const { return last_; }

private:
    PidResult pitch_;
    PidResult azimuth_;
    TwoAxis last_;
};

// ---------------------------------------------------------------------------
// State machine
// ---------------------------------------------------------------------------

enum Stage : std::size_t { kCoarse = 0, kFine1 = 1, kFine2 = 2 };

struct TransitionThresholds {
    double fine1_capture_rad = 5e-3;    ///< coarse residual needed to hand over to FSM1
    double link_threshold_rad = 20e-6;  ///< residual below which the link counts as settled
    int link_dwell_frames = 100;
    int lock_loss_frames = 50;          ///< debounce before declaring a lock lost

    void validate(const std::string& field = "apt") const;
};

struct TransitionInputs {
    bool stabilized = false;
    /// Beacon seen in a valid frame this tick, per stage.
    std::array<bool, 3> lock_now{};
    /// Consecutive frames without lock, per stage.
    std::array<int, 3> lock_miss_frames{};
    /// Residual reported by the innermost active sensor.
    double residual_rad = 0.0;
    /// Consecutive frames with residual below the link threshold.
    int below_threshold_frames = 0;
    bool fine1_enabled = true;
    bool fine2_enabled = true;
};

AptState apt_transition(AptState current, const TransitionInputs& in, const TransitionThresholds& th);

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

struct AptConfig {
    ControllerGains coarse_gains;
    ControllerGains fine1_gains;
    ControllerGains fine2_gains;
    double acquisition_bias_rad = 2e-3;
    double acquisition_bias_direction_rad = 0.7853981633974483;  // pi/4, split across both axes
    bool imu_feedforward = true;
    int fine_stages = 2;        ///< 0: coarse only, 1: + FSM1, 2: full cascade
    double fine_after_s = 0.0;  ///< fine hand-over blocked before this time
    int stabilize_frames = 100;
    AptState initial_state = AptState::Stabilize;
    double sample_period_s = 1e-3;
    TransitionThresholds thresholds;

    void validate(const std::string& field = "apt") const;
};

struct TrackingSample {
    double t_s = 0.0;
    AptState state = AptState::Stabilize;
    double error_pitch_rad = 0.0;  ///< total line-of-sight error after all actuators
    double error_azimuth_rad = 0.0;
    TwoAxis gimbal;
    TwoAxis fsm1;
    TwoAxis fsm2;
    std::array<bool, 3> lock{};  ///< debounced lock per stage

    double radial_error_rad() const;
};

struct TrackingSeries {
    double sample_period_s = 1e-3;
    std::vector<TrackingSample> samples;
    std::string scenario;
    std::uint64_t seed = 0;
};

/// Fixed-step simulation of the full APT stack for `duration_s`.
/// Throws ValidationError for an inconsistent scenario; failing to reach
/// Linked is reported in the series, not thrown.
TrackingSeries run_apt(const Scenario& scenario, double duration_s, std::uint64_t seed);

struct TimeWindow {
    double begin_s = 0.0;
    double end_s = 1e300;  ///< exclusive
};

struct TrackingStats {
    double mean_pitch_rad = 0.0;
    double mean_azimuth_rad = 0.0;
    double std_pitch_rad = 0.0;  ///< population
    double std_azimuth_rad = 0.0;
    double radial_mean_rad = 0.0;
    std::size_t count = 0;
};

/// Statistics of the samples with begin <= t < end. Throws
/// ValidationError when the window holds no samples.
TrackingStats tracking_stats(const TrackingSeries& series, TimeWindow window);

/// Same, restricted to samples in `state`.
TrackingStats tracking_stats(const TrackingSeries& series, TimeWindow window, AptState state);

std::string tracking_to_csv(const TrackingSeries& series);

/// Parses the CSV produced by tracking_to_csv. Gimbal angles are not part
/// of the CSV and come back as zero.
TrackingSeries tracking_from_csv(std::string_view text);

}  // namespace fsolink::apt
