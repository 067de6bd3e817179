// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/format.h>
#include <json.hpp>

#include "autoreg/experiments.hpp"
#include "autoreg/regularization.hpp"
#include "autoreg/wiener.hpp"
#include "commands.hpp"
#include "experiment_config.hpp"
#include "io.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace autoreg;
using autoreg::testing::rel_diff;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

cli::ExperimentConfig load_config(const char* name) {
    const fs::path path = fs::path(AUTOREG_SOURCE_DIR) / "configs" / name;
    return cli::parse_experiment_config(nlohmann::json::parse(cli::read_text(path)));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Instance draw shared by A1-A3: window, length, noise level.
struct Draw {
    std::size_t l, n;
    double noise;
};

Draw draw_instance(std::mt19937_64& rng, std::size_t l_lo, std::size_t l_hi, std::size_t n_hi) {
    std::uniform_int_distribution<std::size_t> ld(l_lo, l_hi);
    const std::size_t l = ld(rng);
    std::uniform_int_distribution<std::size_t> nd(2 * l, std::max(2 * l, n_hi));
    std::uniform_real_distribution<double> snr(-5.0, 40.0);
    return {l, nd(rng), std::pow(10.0, -snr(rng) / 20.0)};
}

Outcome a1_iteration_forms() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    std::size_t compared = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const Draw dr = draw_instance(rng, 4, 64, 1000);
        const SampleStats stats = build_stats(testing::random_signal(dr.l, dr.n, dr.noise, 5000 + inst));
        const EigenStats es = to_eigen_domain(stats);
        double a_eig = 0.5, a_mat = 0.5;
        for (int k = 0; k < 10; ++k) {
            const StepResult e = gm_step_eigen(es, a_eig);
            const StepResult m = gm_step_matrix(stats, a_mat);
            for (double r : {rel_diff(e.alpha_next, m.alpha_next), rel_diff(e.state.gamma, m.state.gamma),
                             rel_diff(e.state.v_e, m.state.v_e), rel_diff(e.state.v_w, m.state.v_w)}) {
                worst = std::max(worst, r);
            }
            a_eig = e.alpha_next;
            a_mat = m.alpha_next;
            ++compared;
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-8 && secs < 30.0,
            fmt::format("{} steps, worst rel diff {:.2e} (tol 1e-8), {:.1f} s (limit 30 s)", compared,
                        worst, secs)};
}

Outcome a2_closed_forms() {
    std::mt19937_64 rng(202);
    double worst = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        const Draw dr = draw_instance(rng, 1, 50, 600);
        const SignalPair sig = testing::random_signal(dr.l, dr.n, dr.noise, 7000 + inst);
        const SampleStats stats = build_stats(sig);
        const EigenStats es = to_eigen_domain(stats);
        const double alpha = std::pow(10.0, std::uniform_real_distribution<double>(-4.0, 1.0)(rng)) *
                             stats.r_x.max_abs();
        const Vector w = solve_regularized(stats.r_x, alpha, stats.r_xd);
        worst = std::max({worst,
                          rel_diff(residual_energy_per_sample(es, alpha), testing::direct_residual(sig, w)),
                          rel_diff(trace_inverse(es.lambda, alpha),
                                   regularized_inverse(stats.r_x, alpha).trace()),
                          rel_diff(w_norm_sq(es, alpha), w.squaredNorm())});
    }
    return {worst <= 1e-10, fmt::format("100 instances, worst rel diff {:.2e} (tol 1e-10)", worst)};
}

Outcome a3_evidence() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const Draw dr = draw_instance(rng, 1, 40, 200);
        const std::size_t n = std::min<std::size_t>(dr.n, 200);
        const SignalPair sig = testing::random_signal(dr.l, n, dr.noise, 9000 + inst);
        const EigenStats es = to_eigen_domain(build_stats(sig));
        std::uniform_real_distribution<double> lv(-3.0, 1.0);
        const double v_e = std::pow(10.0, lv(rng));
        const double v_w = std::pow(10.0, lv(rng));
        worst = std::max(worst, rel_diff(log_evidence(es, v_e, v_w),
                                         testing::dense_log_evidence(sig, v_e, v_w)));
    }
    return {worst <= 1e-8, fmt::format("50 instances, worst rel diff {:.2e} (tol 1e-8)", worst)};
}

Outcome a4_stationarity() {
    const cli::ExperimentConfig cfg = load_config("matched.json");
    double worst = 0.0;
    std::size_t instances = 0, unconverged = 0;
    for (std::size_t n : {256u, 1024u}) {
        for (double snr : {0.0, 10.0, 20.0, 30.0}) {
            ScenarioConfig scn = cfg.cell(n, snr);
            for (std::size_t r = 0; r < 3; ++r) {
                const EigenStats es = to_eigen_domain(build_stats(simulate(scn, r)));
                const IterationTrace tr = estimate_alpha(es, {0.5, 1000, 1e-10});
                if (tr.status != TraceStatus::EarlyConverged) {
                    ++unconverged;
                    continue;
                }
                const RegState st = gm_step_eigen(es, tr.final_alpha).state;
                const double ell = log_evidence(es, st.v_e, st.v_w);
                // d ell / d log v by central differences, scaled by |ell|
                const double h = 1e-5;
                const double ge = (log_evidence(es, st.v_e * std::exp(h), st.v_w) -
                                   log_evidence(es, st.v_e * std::exp(-h), st.v_w)) / (2 * h);
                const double gw = (log_evidence(es, st.v_e, st.v_w * std::exp(h)) -
                                   log_evidence(es, st.v_e, st.v_w * std::exp(-h))) / (2 * h);
                worst = std::max({worst, std::abs(ge) / std::abs(ell), std::abs(gw) / std::abs(ell)});
                ++instances;
            }
        }
    }
    return {instances >= 20 && unconverged == 0 && worst <= 1e-4,
            fmt::format("{} converged instances ({} unconverged), worst |v dl/dv|/|l| {:.2e} (tol 1e-4)",
                        instances, unconverged, worst)};
}

// Per-cell results of a sweep, keyed by (snr, N).
using Sweep = std::map<std::pair<double, std::size_t>, std::vector<RealizationResult>>;

Sweep run_sweep(const cli::ExperimentConfig& cfg) {
    Sweep out;
    for (double snr : cfg.snr_db)
        for (std::size_t n : cfg.samples) out[{snr, n}] = run_scenario(cfg.cell(n, snr), 4);
    return out;
}

Outcome a5_matched() {
    const auto t0 = Clock::now();
    const cli::ExperimentConfig cfg = load_config("matched.json");
    const Sweep sweep = run_sweep(cfg);
    const double secs = seconds_since(t0);

    bool ok = true;
    double worst_gap = -INFINITY;
    std::map<std::pair<double, std::size_t>, double> cell_mean;
    std::size_t failures = 0;
    for (const auto& [key, res] : sweep) {
        std::vector<double> gap, m;
        for (const auto& r : res) {
            if (!r.ok()) {
                ++failures;
                continue;
            }
            gap.push_back(r.m_auto - r.m_oracle);
            m.push_back(r.m_auto);
        }
        if (gap.empty()) {
            ok = false;
            continue;
        }
        worst_gap = std::max(worst_gap, median(gap));
        cell_mean[key] = mean(m);
    }
    ok = ok && failures == 0 && worst_gap <= 1.0;

    std::size_t order_violations = 0;
    for (std::size_t i = 0; i < cfg.snr_db.size(); ++i) {
        for (std::size_t j = 0; j < cfg.samples.size(); ++j) {
            const double here = cell_mean[{cfg.snr_db[i], cfg.samples[j]}];
            if (j + 1 < cfg.samples.size() && cell_mean[{cfg.snr_db[i], cfg.samples[j + 1]}] > here)
                ++order_violations;
            if (i + 1 < cfg.snr_db.size() && cell_mean[{cfg.snr_db[i + 1], cfg.samples[j]}] > here)
                ++order_violations;
        }
    }
    ok = ok && order_violations == 0 && secs < 120.0;
    return {ok, fmt::format("worst cell median gap {:.3f} dB (tol 1 dB), {} ordering violations, "
                            "{} failed realizations, {:.1f} s (limit 120 s)",
                            worst_gap, order_violations, failures, secs)};
}

Outcome a6_mismatch_floor() {
    const cli::ExperimentConfig cfg = load_config("mismatched.json");
    const double floor = mismatch_floor(cfg.impulse(), cfg.window);
    const Sweep sweep = run_sweep(cfg);
    std::size_t below = 0, failures = 0;
    for (const auto& [key, res] : sweep) {
        for (const auto& r : res) {
            if (!r.ok()) {
                ++failures;
                continue;
            }
            if (r.m_auto < floor || r.m_oracle < floor) ++below;
        }
    }
    std::vector<double> m;
    for (const auto& r : sweep.at({30.0, 2048})) {
        if (r.ok()) m.push_back(r.m_auto);
    }
    const double excess = m.empty() ? INFINITY : mean(m) - floor;
    return {below == 0 && failures == 0 && excess <= 3.0,
            fmt::format("floor {:.3f} dB, {} values below floor, mean at 30 dB / N=2048 is "
                        "{:.3f} dB above floor (tol 3 dB)",
                        floor, below, excess)};
}

Outcome a7_convergence() {
    const cli::ExperimentConfig cfg = load_config("matched.json");
    bool ok = true;
    std::string detail;
    for (double snr : cfg.snr_db) {
        ScenarioConfig scn = cfg.cell(1024, snr);
        scn.iters = 10;
        scn.rel_tol = 0.0;
        std::vector<double> change;
        for (const auto& r : run_scenario(scn, 4)) {
            const auto a = r.trace.alphas();
            if (!r.ok() || a.size() < 11) {
                change.push_back(INFINITY);
                continue;
            }
            change.push_back(std::abs(a[10] - a[5]) / a[5]);
        }
        const double med = median(change);
        ok = ok && med < 0.05;
        detail += fmt::format("{}SNR {:g} dB: {:.2e}", detail.empty() ? "" : ", ", snr, med);
    }
    return {ok, "median |a10 - a5|/a5 at N=1024 (tol 0.05): " + detail};
}

Outcome a8_gamma() {
    std::size_t bad = 0;
    double worst_low = 0.0, worst_high = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const auto l = static_cast<Eigen::Index>(2 + inst % 40);
        const SymmetricMatrix r(testing::random_psd(l, l + 3, 400 + inst));
        const Vector lambda = sym_eig_psd(r).eigenvalues;
        const double lmax = lambda.maxCoeff();
        const double lmin = lambda.minCoeff();
        const double ld = static_cast<double>(l);
        double prev = ld;
        for (int k = 0; k <= 240; ++k) {
            const double alpha = lmin * 1e-8 * std::pow(10.0, k * (std::log10(lmax / lmin) + 16.0) / 240.0);
            const double g = effective_params(lambda, alpha);
            if (!(g > 0.0 && g < ld) || g > prev) ++bad;
            prev = g;
        }
        worst_low = std::max(worst_low, (ld - effective_params(lambda, 1e-8 * lmin)) / ld);
        worst_high = std::max(worst_high, effective_params(lambda, 1e8 * lmax) / ld);
    }
    const bool ok = bad == 0 && worst_low < 1e-6 && worst_high < 1e-6;
    return {ok, fmt::format("{} range/monotonicity violations; (L - gamma)/L at small alpha {:.1e}, "
                            "gamma/L at large alpha {:.1e}",
                            bad, worst_low, worst_high)};
}

Outcome a9_cli_roundtrip() {
    const fs::path base = fs::temp_directory_path() / fmt::format("autoreg_accept_{}", ::getpid());
    fs::remove_all(base);
    std::ostringstream sink;
    cli::ExperimentOptions opts;
    opts.config_path = fs::path(AUTOREG_SOURCE_DIR) / "configs" / "matched.json";
    opts.out_dir = base / "run1";
    opts.threads = 1;
    int rc = cli::cmd_experiment(opts, sink, sink);
    opts.out_dir = base / "run2";
    opts.threads = 4;
    rc = std::max(rc, cli::cmd_experiment(opts, sink, sink));

    bool identical = rc == 0;
    for (const char* f : {"results.csv", "summary.csv", "traces.csv"}) {
        if (!identical) break;
        identical = cli::read_text(base / "run1" / f) == cli::read_text(base / "run2" / f);
    }

    bool rendered = identical;
    for (const char* kind : {"misalignment-vs-N", "alpha-vs-N"}) {
        if (!rendered) break;
        const fs::path svg = base / fmt::format("{}.svg", kind);
        rendered = cli::cmd_plot({base / "run1" / "results.csv", kind, svg}, sink, sink) == 0 &&
                   cli::read_text(svg).starts_with("<svg");
    }
    if (rendered) {
        const fs::path svg = base / "trace.svg";
        rendered = cli::cmd_plot({base / "run1" / "traces.csv", "alpha-trace", svg}, sink, sink) == 0;
    }
    fs::remove_all(base);
    return {identical && rendered,
            fmt::format("exit {}, CSVs {}, plots {}", rc, identical ? "byte-identical" : "differ",
                        rendered ? "rendered" : "failed")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"A1 iteration forms agree", a1_iteration_forms},
        {"A2 closed-form identities", a2_closed_forms},
        {"A3 evidence vs dense density", a3_evidence},
        {"A4 evidence stationarity", a4_stationarity},
        {"A5 matched-case quality", a5_matched},
        {"A6 mismatch floor", a6_mismatch_floor},
        {"A7 convergence speed", a7_convergence},
        {"A8 effective parameters", a8_gamma},
        {"A9 CLI round trip", a9_cli_roundtrip},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    }
    std::cout << fmt::format("{}/{} criteria passed", criteria.size() - failed, criteria.size())
              << std::endl;
    return failed == 0 ? 0 : 1;
}
