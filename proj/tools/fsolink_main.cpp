// fsolink: command-line front end for the FSO link simulator.
//
// Exit codes: 0 success, 1 validation/parse error, 2 nonconvergence,
// 3 I/O error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsolink/calibration.hpp"
#include "fsolink/errors.hpp"
#include "fsolink/optics.hpp"
#include "fsolink/report.hpp"
#include "fsolink/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kInvalid = 1, kNonConvergence = 2, kIo = 3 };

struct CommonOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration_s;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_duration) {
    cmd->add_option("--scenario", opts.scenario_path, "Scenario JSON file")->required();
    cmd->add_option("--seed", opts.seed, "Override the scenario seed");
    if (with_duration) {
        cmd->add_option("--duration", opts.duration_s, "Simulated duration in seconds");
    }
    cmd->add_option("--out", opts.out_dir, "Directory for output files");
}

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw fsolink::IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw fsolink::IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    if (!out) {
        throw fsolink::IoError("failed writing " + path.string());
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json budget_json(const fsolink::optics::LinkBudget& b, double distance_m) {
    return {{"distance_m", distance_m},     {"diffraction_db", b.diffraction_db},
            {"optics_db", b.optics_db},     {"atmosphere_db", b.atmosphere_db},
            {"coupling_base_db", b.coupling_base_db}, {"jitter_excess_db", b.jitter_excess_db},
            {"total_db", b.total_db}};
}

struct Loaded {
    fsolink::Scenario scenario;
    std::uint64_t seed;
    double duration_s;
};

Loaded load(const CommonOptions& opts) {
    Loaded l{fsolink::load_scenario(opts.scenario_path), 0, 0.0};
    l.seed = opts.seed.value_or(l.scenario.seed);
    l.duration_s = opts.duration_s.value_or(l.scenario.duration_s);
    return l;
}

int cmd_budget(const CommonOptions& opts, std::optional<double> distance_km, double error_urad) {
    const Loaded l = load(opts);
    const double d = distance_km ? *distance_km * 1000.0 : l.scenario.link_distance_m();
    const auto b = fsolink::optics::link_budget(l.scenario.optics, d, error_urad * 1e-6);
    const std::string text = dump(budget_json(b, d));
    if (!opts.out_dir.empty()) {
        write_file(fs::path(opts.out_dir) / "budget.json", text);
    }
    std::cout << text;
    return kOk;
}

int cmd_sweep(const CommonOptions& opts, double min_km, double max_km, int steps, bool clear_air) {
    Loaded l = load(opts);
    if (clear_air) {
        l.scenario.optics.atmosphere.visibility_m = std::numeric_limits<double>::infinity();
    }
    const auto rows = fsolink::optics::distance_sweep(l.scenario.optics, min_km * 1000.0, max_km * 1000.0, steps);
    const std::string text = fsolink::optics::sweep_to_csv(rows);
    if (opts.out_dir.empty()) {
        std::cout << text;
    } else {
        write_file(fs::path(opts.out_dir) / "sweep.csv", text);
    }
    return kOk;
}

int cmd_track(const CommonOptions& opts, std::optional<double> fine_after, std::optional<int> fine_stages,
              std::optional<double> settle) {
    Loaded l = load(opts);
    if (fine_after) {
        l.scenario.apt.fine_after_s = *fine_after;
    }
    if (fine_stages) {
        l.scenario.apt.fine_stages = *fine_stages;
    }
    if (settle) {
        l.scenario.link.settle_s = *settle;
    }
    l.scenario.validate();
    const auto series = fsolink::apt::run_apt(l.scenario, l.duration_s, l.seed);

    std::vector<std::pair<std::string, fsolink::apt::TimeWindow>> windows;
    const double settle_s = l.scenario.link.settle_s;
    const double switch_s = l.scenario.apt.fine_after_s;
    if (switch_s > settle_s && switch_s < l.duration_s && l.scenario.apt.fine_stages > 0) {
        windows.push_back({"before_fine", {settle_s, switch_s}});
        windows.push_back({"fine", {switch_s, 1e300}});
    } else {
        windows.push_back({"steady", {settle_s, 1e300}});
    }
    const std::string stats = dump(fsolink::report::track_report_json(l.scenario, series, windows));
    if (!opts.out_dir.empty()) {
        write_file(fs::path(opts.out_dir) / "tracking.csv", fsolink::apt::tracking_to_csv(series));
        write_file(fs::path(opts.out_dir) / "tracking_stats.json", stats);
    }
    std::cout << stats;
    return kOk;
}

bool parse_seed_range(const std::string& text, std::uint64_t& first, std::uint64_t& last) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        return false;
    }
    try {
        first = std::stoull(text.substr(0, dots));
        last = std::stoull(text.substr(dots + 2));
    } catch (const std::exception&) {
        return false;
    }
    return first <= last;
}

void write_run_outputs(const fs::path& dir, const fsolink::report::RunArtifacts& a) {
    write_file(dir / "loss.csv", fsolink::link::loss_to_csv(a.loss));
    write_file(dir / "throughput.csv", fsolink::link::throughput_to_csv(a.throughput));
    write_file(dir / "report.json", dump(fsolink::report::run_report_json(a.report)));
}

int cmd_run(const CommonOptions& opts, const std::string& seeds) {
    const Loaded l = load(opts);
    if (seeds.empty()) {
        const auto artifacts = fsolink::report::run_pipeline(l.scenario, l.duration_s, l.seed);
        if (!opts.out_dir.empty()) {
            write_run_outputs(opts.out_dir, artifacts);
        }
        std::cout << dump(fsolink::report::run_report_json(artifacts.report));
        return kOk;
    }

    std::uint64_t first = 0;
    std::uint64_t last = 0;
    if (!parse_seed_range(seeds, first, last)) {
        throw fsolink::ValidationError("--seeds", "expected a range like 1..10");
    }
    std::vector<std::future<fsolink::report::RunArtifacts>> jobs;
    for (std::uint64_t s = first; s <= last; ++s) {
        jobs.push_back(std::async(std::launch::async, [&l, s] {
            return fsolink::report::run_pipeline(l.scenario, l.duration_s, s);
        }));
        if (s == last) {
            break;  // guard against wrap-around at UINT64_MAX
        }
    }
    json merged = json::array();
    std::uint64_t s = first;
    for (auto& job : jobs) {
        const auto artifacts = job.get();
        if (!opts.out_dir.empty()) {
            write_run_outputs(fs::path(opts.out_dir) / ("seed_" + std::to_string(s)), artifacts);
        }
        merged.push_back(fsolink::report::run_report_json(artifacts.report));
        ++s;
    }
    const std::string text = dump(json{{"replicas", merged}});
    if (!opts.out_dir.empty()) {
        write_file(fs::path(opts.out_dir) / "report.json", text);
    }
    std::cout << text;
    return kOk;
}

int cmd_calibrate(const CommonOptions& opts, const std::string& anchors_arg, const std::string& write_path) {
    const Loaded l = load(opts);
    fsolink::calibration::Anchors anchors;
    if (anchors_arg == "tracked") {
        anchors = fsolink::calibration::tracked_anchors();
    } else if (anchors_arg == "gaussian") {
        anchors = fsolink::calibration::gaussian_anchors();
    } else {
        std::ifstream in(anchors_arg);
        if (!in) {
            throw fsolink::IoError("cannot open anchors file " + anchors_arg);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        json j;
        try {
            j = json::parse(buf.str());
        } catch (const json::parse_error& e) {
            throw fsolink::ParseError(anchors_arg + ": JSON parse error at byte " + std::to_string(e.byte));
        }
        anchors = fsolink::calibration::anchors_from_json(j);
    }
    const auto result = fsolink::calibration::calibrate(l.scenario, anchors, l.seed);
    json j = fsolink::calibration::result_to_json(result);
    j["anchors"] = fsolink::calibration::anchors_to_json(anchors);
    const std::string text = dump(j);
    if (!opts.out_dir.empty()) {
        write_file(fs::path(opts.out_dir) / "calibration.json", text);
    }
    if (!write_path.empty() && result.converged) {
        write_file(write_path, dump(fsolink::scenario_to_json(fsolink::calibration::apply(l.scenario, result))));
    }
    std::cout << text;
    return result.converged ? kOk : kNonConvergence;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free-space optical link and APT simulator"};
    app.require_subcommand(1);

    CommonOptions budget_opts;
    std::optional<double> budget_distance_km;
    double budget_error_urad = 0.0;
    auto* budget = app.add_subcommand("budget", "Static link budget at zero pointing error");
    add_common(budget, budget_opts, false);
    budget->add_option("--distance-km", budget_distance_km, "Override the link distance");
    budget->add_option("--error-urad", budget_error_urad, "Radial pointing error for the jitter term");

    CommonOptions sweep_opts;
    double min_km = 0.1;
    double max_km = 10.0;
    int steps = 100;
    bool clear_air = false;
    auto* sweep = app.add_subcommand("sweep", "Diffraction and static loss versus distance (CSV)");
    add_common(sweep, sweep_opts, false);
    sweep->add_option("--min-km", min_km, "First distance")->capture_default_str();
    sweep->add_option("--max-km", max_km, "Last distance")->capture_default_str();
    sweep->add_option("--steps", steps, "Number of rows")->capture_default_str();
    sweep->add_flag("--clear-air", clear_air, "Ignore atmospheric attenuation");

    CommonOptions track_opts;
    std::optional<double> fine_after;
    std::optional<int> fine_stages;
    std::optional<double> settle;
    auto* track = app.add_subcommand("track", "Simulate the APT loops and report tracking error");
    add_common(track, track_opts, true);
    track->add_option("--fine-after", fine_after, "Enable fine tracking only after this many seconds");
    track->add_option("--fine-stages", fine_stages, "Fine loops to enable: 0, 1 or 2");
    track->add_option("--settle", settle, "Exclude this initial interval from statistics");

    CommonOptions run_opts;
    std::string seeds;
    auto* run = app.add_subcommand("run", "Full pipeline: tracking, loss, throughput and report");
    add_common(run, run_opts, true);
    run->add_option("--seeds", seeds, "Replica seed range a..b, run concurrently");

    CommonOptions cal_opts;
    std::string anchors_arg = "tracked";
    std::string write_path;
    auto* cal = app.add_subcommand("calibrate", "Fit insertion and coupling parameters to loss anchors");
    add_common(cal, cal_opts, false);
    cal->add_option("--anchors", anchors_arg, "tracked, gaussian, or a JSON anchors file")->capture_default_str();
    cal->add_option("--write-scenario", write_path, "Write the calibrated scenario here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (*budget) {
            return cmd_budget(budget_opts, budget_distance_km, budget_error_urad);
        }
        if (*sweep) {
            return cmd_sweep(sweep_opts, min_km, max_km, steps, clear_air);
        }
        if (*track) {
            return cmd_track(track_opts, fine_after, fine_stages, settle);
        }
        if (*run) {
            return cmd_run(run_opts, seeds);
        }
        if (*cal) {
            return cmd_calibrate(cal_opts, anchors_arg, write_path);
        }
    } catch (const fsolink::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const fsolink::NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const fsolink::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}
