#include "fsolink/apt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsolink/csv.hpp"
#include "fsolink/errors.hpp"
#include "fsolink/numeric.hpp"
#include "fsolink/scenario.hpp"

namespace fsolink::apt {

namespace {

constexpr std::array<std::string_view, 7> kStateNames = {
    "Stabilize", "Acquire", "CoarseTrack", "FineTrack1", "FineTrack2", "Linked", "Reacquire",
};

bool lost(const TransitionInputs& in, const TransitionThresholds& th, Stage stage) {
    return in.lock_miss_frames[stage] >= th.lock_loss_frames;
}

int period_ticks(double frame_rate_hz, double dt_s) {
    return std::max(1, static_cast<int>(std::lround(1.0 / (frame_rate_hz * dt_s))));
}

}  // namespace

std::string_view to_string(AptState s) { return kStateNames[static_cast<std::size_t>(s)]; }

std::optional<AptState> parse_state(std::string_view name) {
    for (std::size_t i = 0; i < kStateNames.size(); ++i) {
        if (kStateNames[i] == name) {
            return static_cast<AptState>(i);
        }
    }
    return std::nullopt;
}

bool is_tracking(AptState s) {
    return s == AptState::CoarseTrack || s == AptState::FineTrack1 || s == AptState::FineTrack2 ||
           s == AptState::Linked;
}

bool is_allowed_edge(AptState from, AptState to) {
    if (from == to) {
        return from != AptState::Reacquire;
    }
    switch (from) {
        case AptState::Stabilize: return to == AptState::Acquire;
        case AptState::Acquire: return to == AptState::CoarseTrack;
        case AptState::CoarseTrack: return to == AptState::FineTrack1 || to == AptState::Reacquire;
        case AptState::FineTrack1: return to == AptState::FineTrack2 || to == AptState::Reacquire;
        case AptState::FineTrack2: return to == AptState::Linked || to == AptState::Reacquire;
        case AptState::Linked: return to == AptState::Reacquire;
        case AptState::Reacquire: return to == AptState::Acquire;
    }
    return false;
}

void ControllerGains::validate(const std::string& field) const {
    auto nonneg = [&](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ValidationError(field + "." + name, "must be >= 0");
        }
    };
    nonneg(kp, "kp");
    nonneg(ki, "ki");
    nonneg(kd, "kd");
    if (!std::isfinite(windup_limit) || windup_limit <= 0.0) {
        throw ValidationError(field + ".windup_limit", "must be > 0");
    }
}

PidResult pid_step(const ControllerGains& gains, double error, double integrator, double previous_error,
                   double dt_s) {
    PidResult r;
    r.integrator = std::clamp(integrator + error * dt_s, -gains.windup_limit, gains.windup_limit);
    r.previous_error = error;
    r.command = gains.kp * error + gains.ki * r.integrator + gains.kd * (error - previous_error) / dt_s;
    return r;
}

TwoAxis AxisPairPid::step(const ControllerGains& gains, TwoAxis error, double dt_s) {
    pitch_ = pid_step(gains, error.pitch, pitch_.integrator, pitch_.previous_error, dt_s);
    azimuth_ = pid_step(gains, error.azimuth, azimuth_.integrator, azimuth_.previous_error, dt_s);
    last_ = {pitch_.command, azimuth_.command};
    return last_;
}

void TransitionThresholds::validate(const std::string& field) const {
    if (!std::isfinite(fine1_capture_rad) || fine1_capture_rad <= 0.0) {
        throw ValidationError(field + ".fine1_capture_rad", "must be > 0");
    }
    if (!std::isfinite(link_threshold_rad) || link_threshold_rad <= 0.0) {
        throw ValidationError(field + ".link_threshold_rad", "must be > 0");
    }
    if (link_dwell_frames < 0) {
        throw ValidationError(field + ".link_dwell_frames", "must be >= 0");
    }
    if (lock_loss_frames < 1) {
        throw ValidationError(field + ".lock_loss_frames", "must be >= 1");
    }
}

AptState apt_transition(AptState current, const TransitionInputs& in, const TransitionThresholds& th) {
    switch (current) {
        case AptState::Stabilize:
            return in.stabilized ? AptState::Acquire : current;
        case AptState::Acquire:
            return in.lock_now[kCoarse] ? AptState::CoarseTrack : current;
        case AptState::CoarseTrack:
            if (lost(in, th, kCoarse)) {
                return AptState::Reacquire;
            }
            if (in.fine1_enabled && in.lock_now[kFine1] && in.residual_rad < th.fine1_capture_rad) {
                return AptState::FineTrack1;
            }
            return current;
        case AptState::FineTrack1:
            if (lost(in, th, kCoarse) || lost(in, th, kFine1)) {
                return AptState::Reacquire;
            }
            return in.fine2_enabled && in.lock_now[kFine2] ? AptState::FineTrack2 : current;
        case AptState::FineTrack2:
            if (lost(in, th, kCoarse) || lost(in, th, kFine1) || lost(in, th, kFine2)) {
                return AptState::Reacquire;
            }
            return in.below_threshold_frames >= th.link_dwell_frames ? AptState::Linked : current;
        case AptState::Linked:
            if (lost(in, th, kCoarse) || lost(in, th, kFine1) || lost(in, th, kFine2)) {
                return AptState::Reacquire;
            }
            return current;
        case AptState::Reacquire:
            return AptState::Acquire;
    }
    return current;
}

void AptConfig::validate(const std::string& field) const {
    coarse_gains.validate(field + ".gains.coarse");
    fine1_gains.validate(field + ".gains.fine1");
    fine2_gains.validate(field + ".gains.fine2");
    thresholds.validate(field);
    if (!std::isfinite(acquisition_bias_rad) || acquisition_bias_rad < 0.0) {
        throw ValidationError(field + ".acquisition_bias_rad", "must be >= 0");
    }
    if (!std::isfinite(acquisition_bias_direction_rad)) {
        throw ValidationError(field + ".acquisition_bias_direction_rad", "must be finite");
    }
    if (fine_stages < 0 || fine_stages > 2) {
        throw ValidationError(field + ".fine_stages", "must be 0, 1 or 2");
    }
    if (!std::isfinite(fine_after_s) || fine_after_s < 0.0) {
        throw ValidationError(field + ".fine_after_s", "must be >= 0");
    }
    if (stabilize_frames < 0) {
        throw ValidationError(field + ".stabilize_frames", "must be >= 0");
    }
    if (initial_state == AptState::Reacquire) {
        throw ValidationError(field + ".initial_state", "cannot start in Reacquire");
    }
    if (!std::isfinite(sample_period_s) || sample_period_s <= 0.0) {
        throw ValidationError(field + ".sample_period_s", "must be > 0");
    }
}

double TrackingSample::radial_error_rad() const { return std::hypot(error_pitch_rad, error_azimuth_rad); }

TrackingSeries run_apt(const Scenario& scenario, double duration_s, std::uint64_t seed) {
    scenario.validate();
    if (!std::isfinite(duration_s) || duration_s <= 0.0) {
        throw ValidationError("duration_s", "must be > 0");
    }
    const AptConfig& cfg = scenario.apt;
    const double dt = cfg.sample_period_s;
    const auto ticks = static_cast<std::size_t>(std::llround(duration_s / dt));

    // Required gimbal angles from the RTK pointing solution.
    const auto solution = geometry::pointing_solution(scenario.node_a, scenario.node_b);
    const TwoAxis target{solution.elevation_rad,
                         geometry::wrap_pi(solution.azimuth_rad - scenario.mount_azimuth_rad)};
    if (std::abs(target.pitch) > scenario.gimbal.pitch_range_rad ||
        std::abs(target.azimuth) > scenario.gimbal.azimuth_range_rad) {
        throw ValidationError("mount_azimuth_deg", "peer lies outside the gimbal travel from this mount");
    }
    const TwoAxis bias{cfg.acquisition_bias_rad * std::cos(cfg.acquisition_bias_direction_rad),
                       cfg.acquisition_bias_rad * std::sin(cfg.acquisition_bias_direction_rad)};
    const TwoAxis acquisition_command = target + bias;

    Rng disturbance_rng = derive_stream(seed, stream::kDisturbance);
    Rng imu_rng = derive_stream(seed, stream::kImu);
    std::array<Rng, 3> cmos_rng = {derive_stream(seed, stream::kCmosCoarse), derive_stream(seed, stream::kCmosFine1),
                                   derive_stream(seed, stream::kCmosFine2)};
    dynamics::DisturbanceSource disturbance(scenario.disturbance);

    std::array<int, 3> frame_period{};
    for (std::size_t k = 0; k < 3; ++k) {
        frame_period[k] = period_ticks(scenario.cmos[k].frame_rate_hz, dt);
    }

    AptState state = cfg.initial_state;
    const bool start_tracking = is_tracking(state);
    dynamics::GimbalState gimbal;
    gimbal.angle = start_tracking ? acquisition_command : TwoAxis{};
    const TwoAxis hold_angle = gimbal.angle;
    dynamics::FsmState fsm1;
    dynamics::FsmState fsm2;

    AxisPairPid coarse_pid;
    AxisPairPid fine1_pid;
    AxisPairPid fine2_pid;
    TwoAxis coarse_cmd;
    TwoAxis fine1_cmd;
    TwoAxis fine2_cmd;
    TwoAxis stabilization;

    std::array<dynamics::SensorFrame, 3> frames{};
    std::array<int, 3> miss{};
    miss.fill(start_tracking ? 0 : cfg.thresholds.lock_loss_frames);
    int frames_in_state = 0;
    int below_threshold = 0;
    TwoAxis previous_base;

    TrackingSeries series;
    series.sample_period_s = dt;
    series.scenario = scenario.name;
    series.seed = seed;
    series.samples.reserve(ticks);

    for (std::size_t i = 0; i < ticks; ++i) {
        const double t = static_cast<double>(i) * dt;

        const TwoAxis base = disturbance.sample(t, disturbance_rng);
        const TwoAxis base_rate = i == 0 ? TwoAxis{} : (1.0 / dt) * (base - previous_base);
        previous_base = base;
        const TwoAxis imu = dynamics::imu_measure(scenario.imu, base_rate, imu_rng);
        if (cfg.imu_feedforward) {
            stabilization = stabilization - dt * imu;
        }

        // Residual after each actuator stage.
        const TwoAxis err_gimbal = gimbal.angle + base - target;
        const TwoAxis err_fine1 = err_gimbal + fsm1.deflection;
        const TwoAxis err_total = err_fine1 + fsm2.deflection;

        // The peer terminal is identical, so its transmit error mirrors ours.
        const std::array<bool, 3> beacon_seen = {
            dynamics::beacon_visible(scenario.beacons[kCoarse], err_gimbal.norm()),
            dynamics::beacon_visible(scenario.beacons[kFine1], err_total.norm()),
            dynamics::beacon_visible(scenario.beacons[kFine2], err_total.norm()),
        };
        const std::array<TwoAxis, 3> sensed = {err_gimbal, err_fine1, err_total};
        std::array<bool, 3> fresh{};
        for (std::size_t k = 0; k < 3; ++k) {
            if (i % static_cast<std::size_t>(frame_period[k]) != 0) {
                continue;
            }
            fresh[k] = true;
            frames[k] = dynamics::cmos_measure(scenario.cmos[k], sensed[k].pitch, sensed[k].azimuth, beacon_seen[k],
                                               t, cmos_rng[k]);
            miss[k] = frames[k].valid ? 0 : std::min(miss[k] + 1, cfg.thresholds.lock_loss_frames);
        }

        double residual = std::numeric_limits<double>::infinity();
        switch (state) {
            case AptState::CoarseTrack:
                residual = frames[kCoarse].valid ? frames[kCoarse].offset().norm() : residual;
                break;
            case AptState::FineTrack1:
                residual = frames[kFine1].valid ? frames[kFine1].offset().norm() : residual;
                break;
            case AptState::FineTrack2:
            case AptState::Linked:
                residual = frames[kFine2].valid ? frames[kFine2].offset().norm() : residual;
                break;
            default:
                break;
        }
        const bool settling = state == AptState::FineTrack2 || state == AptState::Linked;
        below_threshold = settling && residual < cfg.thresholds.link_threshold_rad ? below_threshold + 1 : 0;

        TransitionInputs in;
        in.stabilized = frames_in_state >= cfg.stabilize_frames;
        for (std::size_t k = 0; k < 3; ++k) {
            in.lock_now[k] = frames[k].valid;
        }
        in.lock_miss_frames = miss;
        in.residual_rad = residual;
        in.below_threshold_frames = below_threshold;
        in.fine1_enabled = cfg.fine_stages >= 1 && t >= cfg.fine_after_s;
        in.fine2_enabled = cfg.fine_stages >= 2 && t >= cfg.fine_after_s;

        const AptState next = apt_transition(state, in, cfg.thresholds);
        if (next != state) {
            frames_in_state = 0;
            below_threshold = 0;
            if (next == AptState::Acquire || next == AptState::Reacquire) {
                coarse_pid.reset();
                fine1_pid.reset();
                fine2_pid.reset();
                coarse_cmd = fine1_cmd = fine2_cmd = TwoAxis{};
            }
            state = next;
        }
        ++frames_in_state;

        // Control laws active in the (possibly new) state.
        const bool coarse_on = is_tracking(state);
        const bool fine1_on = state == AptState::FineTrack1 || state == AptState::FineTrack2 ||
                              state == AptState::Linked;
        const bool fine2_on = state == AptState::FineTrack2 || state == AptState::Linked;

        if (coarse_on && fresh[kCoarse] && frames[kCoarse].valid) {
            coarse_cmd = coarse_pid.step(cfg.coarse_gains, -1.0 * frames[kCoarse].offset(), dt);
        }
        if (!fine1_on) {
            fine1_pid.reset();
            fine1_cmd = {};
        } else if (fresh[kFine1] && frames[kFine1].valid) {
            fine1_cmd = dynamics::clamp_to_range(scenario.fsm1,
                                                 fine1_pid.step(cfg.fine1_gains, -1.0 * frames[kFine1].offset(), dt));
        }
        if (!fine2_on) {
            fine2_pid.reset();
            fine2_cmd = {};
        } else if (fresh[kFine2] && frames[kFine2].valid) {
            fine2_cmd = dynamics::clamp_to_range(scenario.fsm2,
                                                 fine2_pid.step(cfg.fine2_gains, -1.0 * frames[kFine2].offset(), dt));
        }

        TwoAxis gimbal_cmd;
        if (state == AptState::Stabilize) {
            gimbal_cmd = hold_angle + stabilization;
        } else if (coarse_on) {
            gimbal_cmd = acquisition_command + stabilization + coarse_cmd;
        } else {
            gimbal_cmd = acquisition_command + stabilization;
        }

        TrackingSample sample;
        sample.t_s = t;
        sample.state = state;
        sample.error_pitch_rad = err_total.pitch;
        sample.error_azimuth_rad = err_total.azimuth;
        sample.gimbal = gimbal.angle;
        sample.fsm1 = fsm1.deflection;
        sample.fsm2 = fsm2.deflection;
        for (std::size_t k = 0; k < 3; ++k) {
            sample.lock[k] = miss[k] < cfg.thresholds.lock_loss_frames;
        }
        series.samples.push_back(sample);

        gimbal = dynamics::gimbal_step(gimbal, scenario.gimbal, gimbal_cmd, dt);
        fsm1 = dynamics::fsm_step(fsm1, scenario.fsm1, fine1_cmd, dt);
        fsm2 = dynamics::fsm_step(fsm2, scenario.fsm2, fine2_cmd, dt);
    }
    return series;
}

namespace {

template <typename Pred>
TrackingStats stats_where(const TrackingSeries& series, TimeWindow window, Pred keep) {
    CompensatedSum sp, sa, sr;
    std::size_t n = 0;
    for (const auto& s : series.samples) {
        if (s.t_s < window.begin_s || s.t_s >= window.end_s || !keep(s)) {
            continue;
        }
        sp.add(s.error_pitch_rad);
        sa.add(s.error_azimuth_rad);
        sr.add(s.radial_error_rad());
        ++n;
    }
    if (n == 0) {
        throw ValidationError("window", "no tracking samples in the requested window");
    }
    TrackingStats out;
    out.count = n;
    const double inv = 1.0 / static_cast<double>(n);
    out.mean_pitch_rad = sp.value() * inv;
    out.mean_azimuth_rad = sa.value() * inv;
    out.radial_mean_rad = sr.value() * inv;
    CompensatedSum vp, va;
    for (const auto& s : series.samples) {
        if (s.t_s < window.begin_s || s.t_s >= window.end_s || !keep(s)) {
            continue;
        }
        const double dp = s.error_pitch_rad - out.mean_pitch_rad;
        const double da = s.error_azimuth_rad - out.mean_azimuth_rad;
        vp.add(dp * dp);
        va.add(da * da);
    }
    out.std_pitch_rad = std::sqrt(vp.value() * inv);
    out.std_azimuth_rad = std::sqrt(va.value() * inv);
    return out;
}

std::string urad(double rad) { return csv::format_number(rad * 1e6); }

}  // namespace

TrackingStats tracking_stats(const TrackingSeries& series, TimeWindow window) {
    return stats_where(series, window, [](const TrackingSample&) { return true; });
}

TrackingStats tracking_stats(const TrackingSeries& series, TimeWindow window, AptState state) {
    return stats_where(series, window, [state](const TrackingSample& s) { return s.state == state; });
}

std::string tracking_to_csv(const TrackingSeries& series) {
    std::string out =
        "t_s,state,err_pitch_urad,err_az_urad,fsm1_p_urad,fsm1_a_urad,fsm2_p_urad,fsm2_a_urad,lock0,lock1,lock2\n";
    out.reserve(out.size() + series.samples.size() * 96);
    for (const auto& s : series.samples) {
        out += csv::format_number(s.t_s);
        out += ',';
        out += to_string(s.state);
        for (const double v : {s.error_pitch_rad, s.error_azimuth_rad, s.fsm1.pitch, s.fsm1.azimuth, s.fsm2.pitch,
                               s.fsm2.azimuth}) {
            out += ',';
            out += urad(v);
        }
        for (const bool f : s.lock) {
            out += f ? ",1" : ",0";
        }
        out += '\n';
    }
    return out;
}

TrackingSeries tracking_from_csv(std::string_view text) {
    const csv::Table table = csv::parse(text);
    const std::size_t c_t = table.column("t_s");
    const std::size_t c_state = table.column("state");
    const std::array<std::size_t, 6> c_vals = {
        table.column("err_pitch_urad"), table.column("err_az_urad"), table.column("fsm1_p_urad"),
        table.column("fsm1_a_urad"),    table.column("fsm2_p_urad"), table.column("fsm2_a_urad"),
    };
    const std::array<std::size_t, 3> c_lock = {table.column("lock0"), table.column("lock1"), table.column("lock2")};

    TrackingSeries series;
    series.samples.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        TrackingSample s;
        s.t_s = csv::parse_number(row[c_t]);
        const auto state = parse_state(row[c_state]);
        if (!state) {
            throw ParseError("csv: unknown state '" + row[c_state] + "'");
        }
        s.state = *state;
        std::array<double, 6> v{};
        for (std::size_t k = 0; k < 6; ++k) {
            v[k] = csv::parse_number(row[c_vals[k]]) * 1e-6;
        }
        s.error_pitch_rad = v[0];
        s.error_azimuth_rad = v[1];
        s.fsm1 = {v[2], v[3]};
        s.fsm2 = {v[4], v[5]};
        for (std::size_t k = 0; k < 3; ++k) {
            s.lock[k] = row[c_lock[k]] == "1";
        }
        series.samples.push_back(s);
    }
    if (series.samples.size() >= 2) {
        series.sample_period_s = series.samples[1].t_s - series.samples[0].t_s;
    }
    return series;
}

}  // namespace fsolink::apt
