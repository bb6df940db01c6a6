// Acceptance checks: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fsolink/apt.hpp"
#include "fsolink/dynamics.hpp"
#include "fsolink/link.hpp"
#include "fsolink/optics.hpp"
#include "fsolink/report.hpp"
#include "fsolink/scenario.hpp"
#include "support.hpp"

using namespace fsolink;
namespace fs = std::filesystem;

namespace {

constexpr double kWallLimitS = 10.0;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.pass) {
        ++failures;
    }
    std::printf("%s %2d %s:%s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.str().c_str());
    std::fflush(stdout);
}

bool within(double v, double centre, double tol) { return std::abs(v - centre) <= tol; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double urad(double rad) { return rad * 1e6; }

Scenario shipped(const std::string& name) { return load_scenario(test_support::scenario_path(name)); }

double kim_reference_db(double v_m, double lambda_m, double d_m) {
    const double v = v_m / 1000.0;
    double q = 0.0;
    if (v > 50.0) {
        q = 1.6;
    } else if (v > 6.0) {
        q = 1.3;
    } else if (v > 1.0) {
        q = 0.16 * v + 0.34;
    } else if (v > 0.5) {
        q = v - 0.5;
    }
    const double beta = 3.912 / v * std::pow(lambda_m * 1e9 / 550.0, -q);
    return 10.0 / std::log(10.0) * beta * d_m / 1000.0;
}

double quadrature_loss_db(double w, double a, int n) {
    const double h = 2.0 * a / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = -a + (i + 0.5) * h;
        for (int j = 0; j < n; ++j) {
            const double y = -a + (j + 0.5) * h;
            const double r2 = x * x + y * y;
            if (r2 <= a * a) {
                sum += std::exp(-2.0 * r2 / (w * w));
            }
        }
    }
    return -10.0 * std::log10(sum * h * h * 2.0 / (std::numbers::pi * w * w));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    criterion(1, "static loss sweep 0.1-10 km", [](Outcome& o) {
        auto optics = shipped("1km_default").optics;
        optics.atmosphere.visibility_m = std::numeric_limits<double>::infinity();
        const auto rows = optics::distance_sweep(optics, 100.0, 10000.0, 100);
        bool monotone = true;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            monotone = monotone && rows[i].total_static_db >= rows[i - 1].total_static_db;
        }
        const double at10 = rows.back().total_static_db;
        const double at1 = optics::static_loss_db(optics, 1000.0);
        const double rise = at1 - rows.front().total_static_db;
        o.detail << " total(10 km)=" << at10 << " dB, rise below 1 km=" << rise << " dB";
        o.require(at10 <= 12.7 && at10 >= 8.0, "10 km total in [8, 12.7] dB");
        o.require(monotone, "monotone nondecreasing");
        o.require(rise < 1.0, "rise below 1 km < 1 dB");
    });

    criterion(2, "coarse-only tracking, 120 s at 1 km", [](Outcome& o) {
        const auto s = shipped("1km_coarse_only");
        const auto t0 = std::chrono::steady_clock::now();
        const auto series = apt::run_apt(s, 120.0, s.seed);
        const double wall = seconds_since(t0);
        const auto st = apt::tracking_stats(series, {s.link.settle_s, 1e300});
        o.detail << " radial mean=" << urad(st.radial_mean_rad) << " urad, std pitch/az=" << urad(st.std_pitch_rad)
                 << "/" << urad(st.std_azimuth_rad) << " urad, wall=" << wall << " s";
        o.require(within(urad(st.radial_mean_rad), 24.0, 5.0), "radial mean 24 +- 5 urad");
        for (double sd : {urad(st.std_pitch_rad), urad(st.std_azimuth_rad)}) {
            o.require(sd >= 15.0 && sd <= 45.0, "per-axis std in [15, 45] urad");
        }
        o.require(wall <= kWallLimitS, "wall clock <= 10 s");
    });

    criterion(3, "fine tracking after 30 s, last 60 s of 90", [](Outcome& o) {
        auto s = shipped("1km_default");
        s.apt.fine_after_s = 30.0;
        const auto t0 = std::chrono::steady_clock::now();
        const auto series = apt::run_apt(s, 90.0, s.seed);
        const double wall = seconds_since(t0);
        const auto st = apt::tracking_stats(series, {30.0, 90.0});
        const auto before = apt::tracking_stats(series, {s.link.settle_s, 30.0});
        o.detail << " first 30 s radial=" << urad(before.radial_mean_rad) << " urad; last 60 s radial="
                 << urad(st.radial_mean_rad) << " urad, std pitch/az=" << urad(st.std_pitch_rad) << "/"
                 << urad(st.std_azimuth_rad) << " urad";
        o.require(within(urad(st.radial_mean_rad), 3.0, 1.0), "radial mean 3 +- 1 urad");
        for (double sd : {urad(st.std_pitch_rad), urad(st.std_azimuth_rad)}) {
            o.require(sd >= 2.0 && sd <= 5.0, "per-axis std in [2, 5] urad");
        }
        o.require(wall <= kWallLimitS, "wall clock <= 10 s");
    });

    criterion(4, "1 km link loss, full cascade and first stage only", [](Outcome& o) {
        const auto s = shipped("1km_default");
        const auto full = report::run_pipeline(s, s.duration_s, s.seed).report;
        auto one = s;
        one.apt.fine_stages = 1;
        const auto first = report::run_pipeline(one, s.duration_s, s.seed).report;
        if (!full.loss.stats || !first.loss.stats) {
            o.require(false, "loss statistics present");
            return;
        }
        o.detail << " full mean=" << full.loss.stats->mean << " dB std=" << full.loss.stats->std
                 << " dB; first-stage mean=" << first.loss.stats->mean << " dB";
        o.require(within(full.loss.stats->mean, 13.7, 1.0), "full-cascade mean 13.7 +- 1.0 dB");
        o.require(within(full.loss.stats->std, 1.4, 0.7), "full-cascade std 1.4 +- 0.7 dB");
        o.require(within(first.loss.stats->mean, 29.3, 2.0), "first-stage mean 29.3 +- 2 dB");
        o.require(full.runtime_s <= kWallLimitS && first.runtime_s <= kWallLimitS, "wall clock <= 10 s");
    });

    criterion(5, "throughput, 100 s at 1 km and bench", [](Outcome& o) {
        const auto s = shipped("1km_default");
        const auto r = report::run_pipeline(s, 100.0, s.seed).report;
        const auto bench = shipped("bench_direct");
        const auto b = report::run_pipeline(bench, 100.0, bench.seed);
        double bench_min = std::numeric_limits<double>::infinity();
        for (double x : b.throughput.rate_gbps) {
            bench_min = std::min(bench_min, x);
        }
        o.detail << " 1 km mean=" << r.throughput.mean << " Gbps std=" << r.throughput.std
                 << " Gbps; bench min=" << bench_min << " Gbps";
        o.require(within(r.throughput.mean, 9.16, 0.2), "mean 9.16 +- 0.2 Gbps");
        o.require(r.throughput.std <= 0.5, "std <= 0.5 Gbps");
        o.require(bench_min == bench.transceiver.effective_tcp_rate_gbps * bench.transceiver.tcp_efficiency &&
                      bench_min == bench.transceiver.effective_tcp_rate_gbps,
                  "bench at 24.0 dB runs at full rate");
    });

    criterion(6, "4 km link in haze", [](Outcome& o) {
        const auto s = shipped("4km_fog");
        const auto r = report::run_pipeline(s, s.duration_s, s.seed).report;
        const double atm = optics::atmospheric_loss_db(s.optics.atmosphere, 4000.0);
        if (!r.loss.stats) {
            o.require(false, "loss statistics present");
            return;
        }
        o.detail << " mean=" << r.loss.stats->mean << " dB std=" << r.loss.stats->std << " dB; atmosphere(4 km)="
                 << atm << " dB";
        o.require(within(r.loss.stats->mean, 18.0, 2.0), "mean 18 +- 2 dB");
        o.require(r.loss.stats->std <= 4.0, "std <= 4 dB");
        o.require(within(atm, 4.2, 0.5), "atmospheric term 4.2 +- 0.5 dB");
    });

    criterion(7, "Kim model against an independent evaluation", [](Outcome& o) {
        double worst = 0.0;
        int points = 0;
        for (double v = 200.0; v <= 100000.0; v *= 1.37) {
            for (double lambda : {532e-9, 785e-9, 850e-9, 1064e-9, 1310e-9, 1550e-9}) {
                for (double d : {1.0, 150.0, 1000.0, 4000.0, 9000.0, 20000.0}) {
                    const double got = optics::atmospheric_loss_db({v, lambda}, d);
                    worst = std::max(worst, std::abs(got - kim_reference_db(v, lambda, d)));
                    ++points;
                }
            }
        }
        o.detail << " " << points << " grid points, worst difference=" << worst << " dB";
        o.require(worst <= 1e-9, "difference <= 1e-9 dB");
    });

    criterion(8, "diffraction closed form against 2-D quadrature", [](Outcome& o) {
        const auto optics = shipped("1km_default").optics;
        double worst = 0.0;
        for (double d = 100.0; d <= 20000.0; d += 1990.0) {
            const double w = optics::beam_radius(optics.beam, d);
            const double oracle = quadrature_loss_db(w, optics.rx.aperture_radius_m(), 500);
            worst = std::max(worst, std::abs(optics::diffraction_loss_db(optics.beam, optics.tx, optics.rx, d) - oracle));
        }
        o.detail << " worst difference=" << worst << " dB over 0.1-20 km";
        o.require(worst <= 0.3, "difference <= 0.3 dB");
    });

    criterion(9, "actuator saturation under random commands", [](Outcome& o) {
        const dynamics::FsmSpec fsm;
        const dynamics::GimbalSpec gimbal;
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> fsm_cmd(-5e-3, 5e-3);
        std::uniform_real_distribution<double> gimbal_cmd(-10.0, 10.0);
        dynamics::FsmState f;
        dynamics::GimbalState g;
        double fsm_peak = 0.0;
        double pitch_peak = 0.0;
        double az_peak = 0.0;
        for (int i = 0; i < 1000000; ++i) {
            f = dynamics::fsm_step(f, fsm, {fsm_cmd(rng), fsm_cmd(rng)}, 1e-3);
            g = dynamics::gimbal_step(g, gimbal, {gimbal_cmd(rng), gimbal_cmd(rng)}, 1e-3);
            fsm_peak = std::max({fsm_peak, std::abs(f.deflection.pitch), std::abs(f.deflection.azimuth)});
            pitch_peak = std::max(pitch_peak, std::abs(g.angle.pitch));
            az_peak = std::max(az_peak, std::abs(g.angle.azimuth));
        }
        o.detail << " FSM peak=" << urad(fsm_peak) << " urad, gimbal peak pitch/az=" << pitch_peak << "/" << az_peak
                 << " rad";
        o.require(fsm_peak <= 212e-6, "FSM within 212 urad");
        o.require(pitch_peak <= std::numbers::pi / 3.0, "gimbal pitch within 60 deg");
        o.require(az_peak <= std::numbers::pi / 2.0, "gimbal azimuth within 90 deg");
    });

    criterion(10, "state machine safety and Linked reachability", [](Outcome& o) {
        const apt::TransitionThresholds th;
        std::mt19937_64 rng(7);
        std::bernoulli_distribution coin(0.5);
        std::uniform_int_distribution<int> miss(0, 60);
        std::uniform_real_distribution<double> residual(0.0, 8e-3);
        std::uniform_int_distribution<int> dwell(0, 150);
        apt::AptState s = apt::AptState::Stabilize;
        int bad = 0;
        for (int i = 0; i < 100000; ++i) {
            apt::TransitionInputs in;
            in.stabilized = coin(rng);
            in.lock_now = {coin(rng), coin(rng), coin(rng)};
            in.lock_miss_frames = {miss(rng), miss(rng), miss(rng)};
            in.residual_rad = residual(rng);
            in.below_threshold_frames = dwell(rng);
            in.fine1_enabled = coin(rng);
            in.fine2_enabled = coin(rng);
            const auto next = apt::apt_transition(s, in, th);
            bad += apt::is_allowed_edge(s, next) ? 0 : 1;
            s = next;
        }
        const auto series = apt::run_apt(test_support::quiet_scenario(), 5.0, 1);
        bool linked = false;
        for (const auto& x : series.samples) {
            linked = linked || x.state == apt::AptState::Linked;
        }
        o.detail << " undefined edges=" << bad << ", Linked reached=" << (linked ? "yes" : "no");
        o.require(bad == 0, "only defined edges");
        o.require(linked, "Linked reachable without noise");
    });

    criterion(11, "determinism of the run command", [](Outcome& o) {
        const fs::path root = fs::temp_directory_path() / ("fsolink_accept_" + std::to_string(::getpid()));
        fs::remove_all(root);
        const std::string scenario = test_support::scenario_path("1km_default").string();
        for (const char* sub : {"a", "b"}) {
            const std::string cmd = std::string("\"") + FSOLINK_CLI + "\" run --scenario \"" + scenario +
                                    "\" --seed 7 --duration 20 --out \"" + (root / sub).string() + "\" > /dev/null";
            o.require(std::system(cmd.c_str()) == 0, std::string("run ") + sub + " exits 0");
        }
        int compared = 0;
        for (const char* file : {"loss.csv", "throughput.csv"}) {
            const std::string a = slurp(root / "a" / file);
            const std::string b = slurp(root / "b" / file);
            o.require(!a.empty() && a == b, std::string(file) + " byte-identical");
            ++compared;
        }
        fs::remove_all(root);
        o.detail << " " << compared << " CSV files compared";
    });

    criterion(12, "cascade ordering over 10 seeds", [](Outcome& o) {
        const auto base = shipped("1km_default");
        double worst_ratio_1 = std::numeric_limits<double>::infinity();
        double worst_ratio_2 = std::numeric_limits<double>::infinity();
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            double radial[3];
            for (int stages = 0; stages <= 2; ++stages) {
                auto s = base;
                s.apt.fine_stages = stages;
                const auto series = apt::run_apt(s, 60.0, seed);
                radial[stages] = apt::tracking_stats(series, {s.link.settle_s, 1e300}).radial_mean_rad;
            }
            worst_ratio_1 = std::min(worst_ratio_1, radial[0] / radial[1]);
            worst_ratio_2 = std::min(worst_ratio_2, radial[1] / radial[2]);
        }
        o.detail << " worst coarse/first=" << worst_ratio_1 << ", worst first/second=" << worst_ratio_2;
        o.require(worst_ratio_1 >= 2.0, "first fine stage halves the residual");
        o.require(worst_ratio_2 >= 2.0, "second fine stage halves the residual");
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
