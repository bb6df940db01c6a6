#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsolink/apt.hpp"
#include "fsolink/optics.hpp"

namespace fsolink::link {

/// Fiber transceiver pair used end to end.
struct TransceiverSpec {
    double rated_rate_gbps = 10.0;
    double effective_tcp_rate_gbps = 9.27;
    double max_tolerable_loss_db = 24.1;
    double tcp_efficiency = 0.988;

    void validate(const std::string& field = "transceiver") const;
};

/// Per-sample optical loss. An empty optional is the link-down marker:
/// no beacon lock, so no loss value exists.
struct LossSeries {
    std::vector<double> t_s;
    std::vector<std::optional<double>> loss_db;
    std::string scenario;
    std::uint64_t seed = 0;

    std::size_t size() const { return t_s.size(); }
};

struct ThroughputSeries {
    std::vector<double> t_s;
    std::vector<double> rate_gbps;
    std::string scenario;
    std::uint64_t seed = 0;

    std::size_t size() const { return t_s.size(); }
};

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;  ///< population
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

/// Loss statistics over the samples that carry a loss value.
struct LossSummary {
    std::optional<SummaryStats> stats;  ///< empty when every sample is link-down
    std::size_t link_down_count = 0;
    std::size_t total_count = 0;
};

/// Loss per tracking sample at `distance_m`, using the radial error of the
/// sample. Throws ValidationError for an empty series.
LossSeries loss_timeseries(const apt::TrackingSeries& tracking, const optics::LinkOptics& optics,
                           double distance_m);

/// `count` samples `period_s` apart, all at `loss_db`. Models a fiber
/// patch with an attenuator instead of a free-space path.
LossSeries constant_loss_series(std::size_t count, double period_s, double loss_db);

/// Hard-threshold transceiver: full effective rate at or below the loss
/// tolerance, zero above it or when the link is down.
ThroughputSeries throughput_series(const LossSeries& loss, const TransceiverSpec& tx);

/// Exact mean / population std / extremes in index order with compensated
/// summation. Throws ValidationError for empty input.
SummaryStats summarize(std::span<const double> samples);

LossSummary summarize_loss(const LossSeries& loss, apt::TimeWindow window = {});
SummaryStats summarize_throughput(const ThroughputSeries& rate, apt::TimeWindow window = {});

/// Share of samples in the window that are link-down or above tolerance.
double downtime_fraction(const LossSeries& loss, const TransceiverSpec& tx, apt::TimeWindow window = {});

std::string loss_to_csv(const LossSeries& loss);
std::string throughput_to_csv(const ThroughputSeries& rate);
LossSeries loss_from_csv(std::string_view text);
ThroughputSeries throughput_from_csv(std::string_view text);

}  // namespace fsolink::link
