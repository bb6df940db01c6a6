#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsolink/optics.hpp"
#include "fsolink/scenario.hpp"

namespace fsolink::calibration {

/// Target mean loss for one pointing-jitter condition. The jitter comes
/// either from a synthetic two-axis Gaussian (`sigma_rad`, per axis) or from
/// simulating the scenario with `fine_stages` fine loops enabled.
struct JitterAnchor {
    std::string label;
    double distance_m = 1000.0;
    double target_mean_loss_db = 0.0;
    std::optional<double> sigma_rad;
    std::optional<int> fine_stages;
    double duration_s = 60.0;  ///< simulated anchors only
};

struct Anchors {
    /// Clear-air static loss (diffraction + both insertion losses) target.
    std::optional<double> static_total_db = 12.7;
    double static_distance_m = 10000.0;
    std::vector<JitterAnchor> jitter;
    double tolerance_db = 0.2;
    int monte_carlo_samples = 200000;
};

/// 13.7 dB at 3 urad and 29.3 dB at 24 urad per-axis Gaussian jitter, 1 km.
Anchors gaussian_anchors();

/// Same targets, with jitter taken from the simulated full cascade and
/// the first fine stage alone.
Anchors tracked_anchors();

Anchors anchors_from_json(const nlohmann::json& j);
nlohmann::json anchors_to_json(const Anchors& a);

struct AnchorResidual {
    std::string label;
    double target_db = 0.0;
    double achieved_db = 0.0;
    double residual_db = 0.0;  ///< achieved - target
    double mean_square_error_rad2 = 0.0;
};

struct CalibrationResult {
    bool converged = false;
    std::string message;
    double insertion_loss_db = 0.0;
    optics::CouplingModel coupling;
    int iterations = 0;
    std::vector<AnchorResidual> residuals;
};

/// Sets the per-terminal insertion loss from the static anchor, then
/// bisects on the coupling roll-off half-width and solves the base
/// coupling loss so the jitter anchors are met. Never throws for an
/// infeasible anchor set; `converged` is false and `message` explains.
CalibrationResult calibrate(const Scenario& scenario, const Anchors& anchors, std::uint64_t seed);

/// Copy of `scenario` with the calibrated parameters applied.
Scenario apply(const Scenario& scenario, const CalibrationResult& result);

nlohmann::json result_to_json(const CalibrationResult& r);

}  // namespace fsolink::calibration
