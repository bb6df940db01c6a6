#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fsolink/apt.hpp"
#include "fsolink/link.hpp"
#include "fsolink/scenario.hpp"

#include <json.hpp>

namespace fsolink::report {

struct StageStats {
    apt::AptState state;
    apt::TrackingStats stats;
};

struct RunReport {
    std::string scenario;
    std::string scenario_digest;
    std::uint64_t seed = 0;
    double duration_s = 0.0;
    double settle_s = 0.0;
    double distance_m = 0.0;
    std::vector<StageStats> tracking;  ///< per state present after settling
    link::LossSummary loss;
    link::SummaryStats throughput;
    double downtime_fraction = 0.0;
    double runtime_s = 0.0;
};

/// Everything one `run` produces.
struct RunArtifacts {
    apt::TrackingSeries tracking;  ///< empty for direct-connection scenarios
    link::LossSeries loss;
    link::ThroughputSeries throughput;
    RunReport report;
};

/// run_apt -> loss_timeseries -> throughput_series -> summaries over
/// t >= scenario.link.settle_s.
RunArtifacts run_pipeline(const Scenario& scenario, double duration_s, std::uint64_t seed);

nlohmann::json tracking_stats_json(const apt::TrackingStats& s);
nlohmann::json summary_json(const link::SummaryStats& s);
nlohmann::json run_report_json(const RunReport& r, bool include_runtime = true);

/// Stats JSON for the `track` verb: one entry per window.
nlohmann::json track_report_json(const Scenario& scenario, const apt::TrackingSeries& series,
                                 const std::vector<std::pair<std::string, apt::TimeWindow>>& windows);

}  // namespace fsolink::report
