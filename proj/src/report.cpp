#include "fsolink/report.hpp"

#include <chrono>
#include <cmath>

#include "fsolink/errors.hpp"

namespace fsolink::report {

using nlohmann::json;

RunArtifacts run_pipeline(const Scenario& scenario, double duration_s, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    scenario.validate();
    if (!std::isfinite(duration_s) || duration_s <= 0.0) {
        throw ValidationError("duration_s", "must be > 0");
    }
    if (duration_s <= scenario.link.settle_s) {
        throw ValidationError("duration_s", "must exceed link.settle_s so statistics have samples");
    }

    RunArtifacts out;
    RunReport& rep = out.report;
    rep.scenario = scenario.name;
    rep.scenario_digest = scenario_digest(scenario);
    rep.seed = seed;
    rep.duration_s = duration_s;
    rep.settle_s = scenario.link.settle_s;
    rep.distance_m = scenario.link_distance_m();
    const apt::TimeWindow window{scenario.link.settle_s, 1e300};

    if (scenario.link.mode == LinkMode::Direct) {
        const auto n = static_cast<std::size_t>(std::llround(duration_s / scenario.apt.sample_period_s));
        out.loss = link::constant_loss_series(n, scenario.apt.sample_period_s, scenario.link.attenuator_db);
        out.loss.scenario = scenario.name;
        out.loss.seed = seed;
    } else {
        out.tracking = apt::run_apt(scenario, duration_s, seed);
        out.loss = link::loss_timeseries(out.tracking, scenario.optics, rep.distance_m);
        if (scenario.link.attenuator_db > 0.0) {
            for (auto& l : out.loss.loss_db) {
                if (l) {
                    *l += scenario.link.attenuator_db;
                }
            }
        }
        for (const apt::AptState s : apt::kAllStates) {
            bool present = false;
            for (const auto& sample : out.tracking.samples) {
                if (sample.state == s && sample.t_s >= window.begin_s) {
                    present = true;
                    break;
                }
            }
            if (present) {
                rep.tracking.push_back({s, apt::tracking_stats(out.tracking, window, s)});
            }
        }
    }
    out.throughput = link::throughput_series(out.loss, scenario.transceiver);
    rep.loss = link::summarize_loss(out.loss, window);
    rep.throughput = link::summarize_throughput(out.throughput, window);
    rep.downtime_fraction = link::downtime_fraction(out.loss, scenario.transceiver, window);
    rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

json tracking_stats_json(const apt::TrackingStats& s) {
    return {{"mean_pitch_urad", s.mean_pitch_rad * 1e6},
            {"mean_azimuth_urad", s.mean_azimuth_rad * 1e6},
            {"std_pitch_urad", s.std_pitch_rad * 1e6},
            {"std_azimuth_urad", s.std_azimuth_rad * 1e6},
            {"radial_mean_urad", s.radial_mean_rad * 1e6},
            {"count", s.count}};
}

json summary_json(const link::SummaryStats& s) {
    return {{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}, {"count", s.count}};
}

json run_report_json(const RunReport& r, bool include_runtime) {
    json tracking = json::object();
    for (const auto& st : r.tracking) {
        tracking[std::string(apt::to_string(st.state))] = tracking_stats_json(st.stats);
    }
    json loss = r.loss.stats ? summary_json(*r.loss.stats) : json{{"mean", nullptr}, {"std", nullptr},
                                                                  {"min", nullptr}, {"max", nullptr},
                                                                  {"count", 0}};
    loss["link_down_count"] = r.loss.link_down_count;
    loss["downtime_fraction"] = r.downtime_fraction;
    json throughput = summary_json(r.throughput);
    throughput["downtime_fraction"] = r.downtime_fraction;

    json j = {{"scenario", r.scenario},
              {"scenario_digest", r.scenario_digest},
              {"seed", r.seed},
              {"duration_s", r.duration_s},
              {"settle_s", r.settle_s},
              {"distance_m", r.distance_m},
              {"tracking", tracking},
              {"loss_db", loss},
              {"throughput_gbps", throughput},
              {"downtime_fraction", r.downtime_fraction}};
    if (include_runtime) {
        j["runtime_s"] = r.runtime_s;
    }
    return j;
}

json track_report_json(const Scenario& scenario, const apt::TrackingSeries& series,
                       const std::vector<std::pair<std::string, apt::TimeWindow>>& windows) {
    json w = json::array();
    for (const auto& [name, window] : windows) {
        json e = tracking_stats_json(apt::tracking_stats(series, window));
        e["name"] = name;
        e["t_begin_s"] = window.begin_s;
        e["t_end_s"] = std::min(window.end_s, series.samples.empty() ? 0.0
                                                                      : series.samples.back().t_s + series.sample_period_s);
        w.push_back(e);
    }
    json states = json::object();
    for (const auto& s : series.samples) {
        auto key = std::string(apt::to_string(s.state));
        if (!states.contains(key)) {
            states[key] = s.t_s;
        }
    }
    return {{"scenario", scenario.name},
            {"scenario_digest", scenario_digest(scenario)},
            {"seed", series.seed},
            {"samples", series.samples.size()},
            {"first_entry_s", states},
            {"windows", w}};
}

}  // namespace fsolink::report
