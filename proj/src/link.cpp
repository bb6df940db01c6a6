#include "fsolink/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsolink/csv.hpp"
#include "fsolink/errors.hpp"
#include "fsolink/numeric.hpp"

namespace fsolink::link {

namespace {

bool in_window(double t, apt::TimeWindow w) { return t >= w.begin_s && t < w.end_s; }

}  // namespace

void TransceiverSpec::validate(const std::string& field) const {
    if (!std::isfinite(rated_rate_gbps) || rated_rate_gbps <= 0.0) {
        throw ValidationError(field + ".rated_rate_gbps", "must be > 0");
    }
    if (!std::isfinite(effective_tcp_rate_gbps) || effective_tcp_rate_gbps <= 0.0 ||
        effective_tcp_rate_gbps > rated_rate_gbps) {
        throw ValidationError(field + ".effective_tcp_rate_gbps", "must lie in (0, rated_rate_gbps]");
    }
    if (!std::isfinite(max_tolerable_loss_db) || max_tolerable_loss_db <= 0.0) {
        throw ValidationError(field + ".max_tolerable_loss_db", "must be > 0");
    }
    if (!std::isfinite(tcp_efficiency) || tcp_efficiency <= 0.0 || tcp_efficiency > 1.0) {
        throw ValidationError(field + ".tcp_efficiency", "must lie in (0, 1]");
    }
}

LossSeries loss_timeseries(const apt::TrackingSeries& tracking, const optics::LinkOptics& optics,
                           double distance_m) {
    if (tracking.samples.empty()) {
        throw ValidationError("tracking", "empty tracking series");
    }
    // Everything except the jitter term is constant along the series.
    const optics::LinkBudget still = optics::link_budget(optics, distance_m, 0.0);
    LossSeries out;
    out.scenario = tracking.scenario;
    out.seed = tracking.seed;
    out.t_s.reserve(tracking.samples.size());
    out.loss_db.reserve(tracking.samples.size());
    for (const auto& s : tracking.samples) {
        out.t_s.push_back(s.t_s);
        if (!apt::is_tracking(s.state)) {
            out.loss_db.emplace_back(std::nullopt);
            continue;
        }
        const double excess = optics::coupling_loss_db(optics.coupling, s.radial_error_rad()) -
                              optics.coupling.base_coupling_loss_db;
        out.loss_db.emplace_back(still.total_db + excess);
    }
    return out;
}

LossSeries constant_loss_series(std::size_t count, double period_s, double loss_db) {
    LossSeries out;
    out.t_s.reserve(count);
    out.loss_db.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.t_s.push_back(static_cast<double>(i) * period_s);
        out.loss_db.emplace_back(loss_db);
    }
    return out;
}

ThroughputSeries throughput_series(const LossSeries& loss, const TransceiverSpec& tx) {
    if (loss.size() == 0) {
        throw ValidationError("loss", "empty loss series");
    }
    const double full = tx.effective_tcp_rate_gbps * tx.tcp_efficiency;
    ThroughputSeries out;
    out.scenario = loss.scenario;
    out.seed = loss.seed;
    out.t_s = loss.t_s;
    out.rate_gbps.reserve(loss.size());
    for (const auto& l : loss.loss_db) {
        out.rate_gbps.push_back(l && *l <= tx.max_tolerable_loss_db ? full : 0.0);
    }
    return out;
}

SummaryStats summarize(std::span<const double> samples) {
    if (samples.empty()) {
        throw ValidationError("series", "cannot summarize an empty series");
    }
    CompensatedSum sum;
    SummaryStats s;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    for (const double x : samples) {
        sum.add(x);
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.count = samples.size();
    const double n = static_cast<double>(s.count);
    // Clamp against rounding that could push the mean a hair outside [min, max].
    s.mean = std::clamp(sum.value() / n, s.min, s.max);
    CompensatedSum sq;
    for (const double x : samples) {
        const double d = x - s.mean;
        sq.add(d * d);
    }
    s.std = std::sqrt(sq.value() / n);
    return s;
}

LossSummary summarize_loss(const LossSeries& loss, apt::TimeWindow window) {
    LossSummary out;
    std::vector<double> values;
    values.reserve(loss.size());
    for (std::size_t i = 0; i < loss.size(); ++i) {
        if (!in_window(loss.t_s[i], window)) {
            continue;
        }
        ++out.total_count;
        if (loss.loss_db[i]) {
            values.push_back(*loss.loss_db[i]);
        } else {
            ++out.link_down_count;
        }
    }
    if (out.total_count == 0) {
        throw ValidationError("window", "no loss samples in the requested window");
    }
    if (!values.empty()) {
        out.stats = summarize(values);
    }
    return out;
}

SummaryStats summarize_throughput(const ThroughputSeries& rate, apt::TimeWindow window) {
    std::vector<double> values;
    values.reserve(rate.size());
    for (std::size_t i = 0; i < rate.size(); ++i) {
        if (in_window(rate.t_s[i], window)) {
            values.push_back(rate.rate_gbps[i]);
        }
    }
    return summarize(values);
}

double downtime_fraction(const LossSeries& loss, const TransceiverSpec& tx, apt::TimeWindow window) {
    std::size_t total = 0;
    std::size_t down = 0;
    for (std::size_t i = 0; i < loss.size(); ++i) {
        if (!in_window(loss.t_s[i], window)) {
            continue;
        }
        ++total;
        const auto& l = loss.loss_db[i];
        if (!l || *l > tx.max_tolerable_loss_db) {
            ++down;
        }
    }
    if (total == 0) {
        throw ValidationError("window", "no loss samples in the requested window");
    }
    return static_cast<double>(down) / static_cast<double>(total);
}

std::string loss_to_csv(const LossSeries& loss) {
    std::string out = "t_s,loss_db,link_up\n";
    out.reserve(out.size() + loss.size() * 24);
    for (std::size_t i = 0; i < loss.size(); ++i) {
        out += csv::format_number(loss.t_s[i]);
        out += ',';
        const auto& l = loss.loss_db[i];
        out += l ? csv::format_number(*l) : std::string("inf");
        out += l ? ",1\n" : ",0\n";
    }
    return out;
}

std::string throughput_to_csv(const ThroughputSeries& rate) {
    std::string out = "t_s,rate_gbps\n";
    out.reserve(out.size() + rate.size() * 20);
    for (std::size_t i = 0; i < rate.size(); ++i) {
        out += csv::format_number(rate.t_s[i]);
        out += ',';
        out += csv::format_number(rate.rate_gbps[i]);
        out += '\n';
    }
    return out;
}

LossSeries loss_from_csv(std::string_view text) {
    const csv::Table table = csv::parse(text);
    const std::size_t c_t = table.column("t_s");
    const std::size_t c_l = table.column("loss_db");
    const std::size_t c_up = table.column("link_up");
    LossSeries out;
    for (const auto& row : table.rows) {
        out.t_s.push_back(csv::parse_number(row[c_t]));
        if (row[c_up] == "1") {
            out.loss_db.emplace_back(csv::parse_number(row[c_l]));
        } else {
            out.loss_db.emplace_back(std::nullopt);
        }
    }
    return out;
}

ThroughputSeries throughput_from_csv(std::string_view text) {
    const csv::Table table = csv::parse(text);
    const std::size_t c_t = table.column("t_s");
    const std::size_t c_r = table.column("rate_gbps");
    ThroughputSeries out;
    for (const auto& row : table.rows) {
        out.t_s.push_back(csv::parse_number(row[c_t]));
        out.rate_gbps.push_back(csv::parse_number(row[c_r]));
    }
    return out;
}

}  // namespace fsolink::link
