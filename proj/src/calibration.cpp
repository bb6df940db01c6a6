#include "fsolink/calibration.hpp"

#include <cmath>
#include <limits>

#include "fsolink/errors.hpp"
#include "fsolink/numeric.hpp"
#include "fsolink/rng.hpp"

namespace fsolink::calibration {

using nlohmann::json;

namespace {

constexpr int kMaxBisection = 200;
constexpr double kThetaLo = 1e-9;
constexpr double kThetaHi = 1e-1;

// Mean of squared radial pointing error for one anchor.
double mean_square_error(const Scenario& scenario, const JitterAnchor& anchor, int mc_samples, std::uint64_t seed) {
    if (anchor.sigma_rad) {
        Rng rng = derive_stream(seed, stream::kCalibration);
        CompensatedSum sum;
        for (int i = 0; i < mc_samples; ++i) {
            const double p = gaussian(rng, *anchor.sigma_rad);
            const double a = gaussian(rng, *anchor.sigma_rad);
            sum.add(p * p + a * a);
        }
        return sum.value() / mc_samples;
    }
    Scenario s = scenario;
    s.apt.fine_stages = *anchor.fine_stages;
    s.apt.fine_after_s = 0.0;
    const apt::TrackingSeries series = apt::run_apt(s, anchor.duration_s, seed);
    CompensatedSum sum;
    std::size_t n = 0;
    for (const auto& sample : series.samples) {
        if (sample.t_s < s.link.settle_s || !apt::is_tracking(sample.state)) {
            continue;
        }
        const double r = sample.radial_error_rad();
        sum.add(r * r);
        ++n;
    }
    if (n == 0) {
        throw ValidationError("anchors." + anchor.label, "simulation produced no tracking samples after settling");
    }
    return sum.value() / static_cast<double>(n);
}

double clear_air_static(const Scenario& s, double insertion_db, double distance_m) {
    optics::LinkOptics o = s.optics;
    o.tx.insertion_loss_db = insertion_db;
    o.rx.insertion_loss_db = insertion_db;
    o.atmosphere.visibility_m = std::numeric_limits<double>::infinity();
    return optics::static_loss_db(o, distance_m);
}

}  // namespace

Anchors gaussian_anchors() {
    Anchors a;
    a.jitter.push_back({"sigma_3urad", 1000.0, 13.7, 3e-6, std::nullopt, 60.0});
    a.jitter.push_back({"sigma_24urad", 1000.0, 29.3, 24e-6, std::nullopt, 60.0});
    return a;
}

Anchors tracked_anchors() {
    Anchors a;
    a.jitter.push_back({"full_cascade", 1000.0, 13.7, std::nullopt, 2, 60.0});
    a.jitter.push_back({"first_fine_stage_only", 1000.0, 29.3, std::nullopt, 1, 60.0});
    return a;
}

Anchors anchors_from_json(const json& j) {
    if (!j.is_object()) {
        throw ValidationError("anchors", "expected a JSON object");
    }
    Anchors a;
    a.jitter.clear();
    for (const auto& [key, value] : j.items()) {
        if (key == "static_total_db") {
            a.static_total_db = value.is_null() ? std::nullopt : std::optional<double>(value.get<double>());
        } else if (key == "static_distance_m") {
            a.static_distance_m = value.get<double>();
        } else if (key == "tolerance_db") {
            a.tolerance_db = value.get<double>();
        } else if (key == "monte_carlo_samples") {
            a.monte_carlo_samples = value.get<int>();
        } else if (key == "jitter") {
            for (std::size_t i = 0; i < value.size(); ++i) {
                const json& e = value[i];
                JitterAnchor ja;
                const std::string field = "anchors.jitter[" + std::to_string(i) + "]";
                for (const auto& [k, v] : e.items()) {
                    if (k == "label") {
                        ja.label = v.get<std::string>();
                    } else if (k == "distance_m") {
                        ja.distance_m = v.get<double>();
                    } else if (k == "mean_loss_db") {
                        ja.target_mean_loss_db = v.get<double>();
                    } else if (k == "sigma_rad") {
                        ja.sigma_rad = v.get<double>();
                    } else if (k == "fine_stages") {
                        ja.fine_stages = v.get<int>();
                    } else if (k == "duration_s") {
                        ja.duration_s = v.get<double>();
                    } else {
                        throw ValidationError(field + "." + k, "unknown key");
                    }
                }
                if (ja.sigma_rad.has_value() == ja.fine_stages.has_value()) {
                    throw ValidationError(field, "give exactly one of sigma_rad or fine_stages");
                }
                if (ja.sigma_rad && !(*ja.sigma_rad >= 0.0)) {
                    throw ValidationError(field + ".sigma_rad", "must be >= 0");
                }
                if (ja.label.empty()) {
                    ja.label = "anchor" + std::to_string(i);
                }
                a.jitter.push_back(ja);
            }
        } else if (key.empty() || key[0] != '_') {
            throw ValidationError("anchors." + key, "unknown key");
        }
    }
    if (a.jitter.size() < 2) {
        throw ValidationError("anchors.jitter", "need at least two jitter anchors");
    }
    return a;
}

json anchors_to_json(const Anchors& a) {
    json jitter = json::array();
    for (const auto& ja : a.jitter) {
        json e = {{"label", ja.label}, {"distance_m", ja.distance_m}, {"mean_loss_db", ja.target_mean_loss_db}};
        if (ja.sigma_rad) {
            e["sigma_rad"] = *ja.sigma_rad;
        } else {
            e["fine_stages"] = *ja.fine_stages;
            e["duration_s"] = ja.duration_s;
        }
        jitter.push_back(e);
    }
    return {{"static_total_db", a.static_total_db ? json(*a.static_total_db) : json(nullptr)},
            {"static_distance_m", a.static_distance_m},
            {"tolerance_db", a.tolerance_db},
            {"monte_carlo_samples", a.monte_carlo_samples},
            {"jitter", jitter}};
}

CalibrationResult calibrate(const Scenario& scenario, const Anchors& anchors, std::uint64_t seed) {
    scenario.validate();
    CalibrationResult out;
    out.coupling = scenario.optics.coupling;
    out.insertion_loss_db = scenario.optics.tx.insertion_loss_db;

    if (anchors.jitter.size() < 2) {
        out.message = "need at least two jitter anchors";
        return out;
    }

    // Insertion loss: clear-air static total at the static anchor distance.
    bool static_ok = true;
    if (anchors.static_total_db) {
        const double diffraction = clear_air_static(scenario, 0.0, anchors.static_distance_m);
        out.insertion_loss_db = std::max(0.0, 0.5 * (*anchors.static_total_db - diffraction));
        const double achieved = clear_air_static(scenario, out.insertion_loss_db, anchors.static_distance_m);
        const double residual = achieved - *anchors.static_total_db;
        out.residuals.push_back({"static_total", *anchors.static_total_db, achieved, residual, 0.0});
        static_ok = std::abs(residual) <= anchors.tolerance_db;
    }

    Scenario working = scenario;
    working.optics.tx.insertion_loss_db = out.insertion_loss_db;
    working.optics.rx.insertion_loss_db = out.insertion_loss_db;

    struct Prepared {
        const JitterAnchor* anchor;
        double static_db;
        double mean_sq;
    };
    std::vector<Prepared> prepared;
    for (const auto& ja : anchors.jitter) {
        const double static_db = optics::static_loss_db(working.optics, ja.distance_m);
        prepared.push_back({&ja, static_db, mean_square_error(working, ja, anchors.monte_carlo_samples, seed)});
    }

    const Prepared& a = prepared[0];
    const Prepared& b = prepared[1];
    // Mean-loss mismatch of anchor b once base is chosen to satisfy anchor a.
    auto mismatch = [&](double theta) {
        return (b.static_db - a.static_db) - (b.anchor->target_mean_loss_db - a.anchor->target_mean_loss_db) +
               optics::kNepersToDb * (b.mean_sq - a.mean_sq) / (theta * theta);
    };

    double lo = std::log(kThetaLo);
    double hi = std::log(kThetaHi);
    double f_lo = mismatch(std::exp(lo));
    const double f_hi = mismatch(std::exp(hi));
    if (!(f_lo * f_hi <= 0.0)) {
        out.message = "jitter anchors are inconsistent: no roll-off half-width reproduces both mean losses";
        const double base = a.anchor->target_mean_loss_db - a.static_db;
        for (const auto& p : prepared) {
            const double achieved = p.static_db + base;
            out.residuals.push_back({p.anchor->label, p.anchor->target_mean_loss_db, achieved,
                                     achieved - p.anchor->target_mean_loss_db, p.mean_sq});
        }
        return out;
    }
    for (out.iterations = 0; out.iterations < kMaxBisection; ++out.iterations) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = mismatch(std::exp(mid));
        if ((f_mid <= 0.0) == (f_lo <= 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-12) {
            break;
        }
    }
    const double theta = std::exp(0.5 * (lo + hi));
    out.coupling.rolloff_halfwidth_rad = theta;
    out.coupling.base_coupling_loss_db =
        a.anchor->target_mean_loss_db - a.static_db - optics::kNepersToDb * a.mean_sq / (theta * theta);

    bool jitter_ok = true;
    for (const auto& p : prepared) {
        const double achieved = p.static_db + out.coupling.base_coupling_loss_db +
                                optics::kNepersToDb * p.mean_sq / (theta * theta);
        const double residual = achieved - p.anchor->target_mean_loss_db;
        out.residuals.push_back({p.anchor->label, p.anchor->target_mean_loss_db, achieved, residual, p.mean_sq});
        jitter_ok = jitter_ok && std::abs(residual) <= anchors.tolerance_db;
    }
    if (!(out.coupling.base_coupling_loss_db > 0.0)) {
        out.message = "solved base coupling loss is not positive";
        return out;
    }
    out.converged = static_ok && jitter_ok;
    out.message = out.converged ? "all anchors met" : "anchors not met within tolerance";
    return out;
}

Scenario apply(const Scenario& scenario, const CalibrationResult& result) {
    Scenario s = scenario;
    s.optics.tx.insertion_loss_db = result.insertion_loss_db;
    s.optics.rx.insertion_loss_db = result.insertion_loss_db;
    s.optics.coupling = result.coupling;
    return s;
}

json result_to_json(const CalibrationResult& r) {
    json residuals = json::array();
    for (const auto& a : r.residuals) {
        residuals.push_back({{"label", a.label},
                             {"target_db", a.target_db},
                             {"achieved_db", a.achieved_db},
                             {"residual_db", a.residual_db},
                             {"mean_square_error_urad2", a.mean_square_error_rad2 * 1e12}});
    }
    return {{"converged", r.converged},
            {"message", r.message},
            {"iterations", r.iterations},
            {"antenna", {{"insertion_loss_db", r.insertion_loss_db}}},
            {"coupling",
             {{"base_coupling_loss_db", r.coupling.base_coupling_loss_db},
              {"rolloff_halfwidth_rad", r.coupling.rolloff_halfwidth_rad}}},
            {"residuals", residuals}};
}

}  // namespace fsolink::calibration
