#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "autoreg/error.hpp"
#include "autoreg/experiments.hpp"
#include "autoreg/regularization.hpp"
#include "experiment_config.hpp"
#include "io.hpp"
#include "svg_plot.hpp"

#ifndef AUTOREG_VERSION
#define AUTOREG_VERSION "0.0.0"
#endif

namespace autoreg::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

int exit_code_for(ErrorKind kind) {
    return kind == ErrorKind::InvalidInput ? kExitUsage : kExitNumerical;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

void write_manifest(const fs::path& dir, const std::string& command, ordered_json config,
                    const ordered_json& seed, const std::vector<std::string>& outputs,
                    Clock::time_point started, const std::vector<std::string>& notes = {}) {
    ordered_json m;
    m["command"] = command;
    m["version"] = AUTOREG_VERSION;
    m["config"] = std::move(config);
    m["seed"] = seed;
    m["outputs"] = outputs;
    if (!notes.empty()) m["notes"] = notes;
    m["duration_seconds"] =
        std::chrono::duration<double>(Clock::now() - started).count();
    write_text(dir / "manifest.json", m.dump(2) + "\n");
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code_for(e.kind());
    }
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nan("");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

// fit ------------------------------------------------------------------------

int cmd_fit(const FitOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto started = Clock::now();
        std::vector<double> x = read_samples(opts.x_path);
        std::vector<double> d = read_samples(opts.d_path);
        if (x.size() != d.size()) {
            throw UsageError(fmt::format("x has {} samples but d has {}", x.size(), d.size()));
        }
        if (x.empty()) throw UsageError("sample files are empty");
        if (opts.window < 1) throw UsageError("--L must be >= 1");
        const std::size_t n = x.size();

        const EigenStats es =
            to_eigen_domain(build_stats(zero_prehistory(std::move(x), std::move(d), opts.window)));
        const IterationTrace trace = estimate_alpha(es, {opts.alpha0, opts.iters, opts.rel_tol});
        const WienerSolution sol = solve_wiener(es, trace.final_alpha);
        const RegState final_state = gm_step_eigen(es, trace.final_alpha).state;

        ensure_dir(opts.out_dir);

        std::string filter = "tap,w\n";
        for (Eigen::Index i = 0; i < sol.w_hat.size(); ++i) {
            filter += fmt::format("{},{}\n", i, format_number(sol.w_hat[i]));
        }
        write_text(opts.out_dir / "filter.csv", filter);

        std::string tr = "iter,alpha,gamma,v_e,v_w\n";
        for (const RegState& s : trace.steps) {
            tr += fmt::format("{},{},{},{},{}\n", s.iter, format_number(s.alpha),
                              format_number(s.gamma), format_number(s.v_e), format_number(s.v_w));
        }
        tr += fmt::format("{},{},{},{},{}\n", trace.steps.size(), format_number(final_state.alpha),
                          format_number(final_state.gamma), format_number(final_state.v_e),
                          format_number(final_state.v_w));
        write_text(opts.out_dir / "trace.csv", tr);

        ordered_json summary;
        summary["alpha"] = trace.final_alpha;
        summary["gamma"] = final_state.gamma;
        summary["v_e"] = final_state.v_e;
        summary["v_w"] = final_state.v_w;
        summary["iterations"] = trace.steps.size();
        summary["status"] = to_string(trace.status);
        summary["N"] = n;
        summary["L"] = opts.window;
        write_text(opts.out_dir / "summary.json", summary.dump(2) + "\n");

        ordered_json config;
        config["x"] = opts.x_path.string();
        config["d"] = opts.d_path.string();
        config["L"] = opts.window;
        config["alpha0"] = opts.alpha0;
        config["iters"] = opts.iters;
        config["rel_tol"] = opts.rel_tol;
        write_manifest(opts.out_dir, "fit", config, nullptr,
                       {"filter.csv", "trace.csv", "summary.json"}, started,
                       {"input prehistory x(-L+1..-1) taken as zeros"});

        out << fmt::format("alpha = {}  gamma = {}  v_e = {}  v_w = {}  ({} iterations, {})\n",
                           format_number(trace.final_alpha), format_number(final_state.gamma),
                           format_number(final_state.v_e), format_number(final_state.v_w),
                           trace.steps.size(), to_string(trace.status));
        return static_cast<int>(kExitOk);
    });
}

// experiment -----------------------------------------------------------------

int cmd_experiment(const ExperimentOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto started = Clock::now();
        const std::string text = read_text(opts.config_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError(fmt::format("{}: {}", opts.config_path.string(), e.what()));
        }
        ExperimentConfig cfg = parse_experiment_config(j);
        if (const char* env = std::getenv("AUTOREG_SEED"); env && *env) {
            try {
                std::size_t used = 0;
                cfg.seed = std::stoull(env, &used);
                if (env[used] != '\0') throw std::invalid_argument(env);
            } catch (const std::exception&) {
                throw UsageError(fmt::format("AUTOREG_SEED='{}' is not an unsigned integer", env));
            }
        }

        const double floor = mismatch_floor(cfg.impulse(), cfg.window);
        std::string results =
            "N,snr_db,realization,alpha_auto,m_auto_db,alpha_oracle,m_oracle_db,iterations,"
            "status,floor_db,error\n";
        std::string summary =
            "N,snr_db,realizations,failed,mean_m_auto_db,median_m_auto_db,mean_m_oracle_db,"
            "median_m_oracle_db,median_gap_db,mean_alpha_auto,median_alpha_auto,"
            "mean_alpha_oracle,median_alpha_oracle,floor_db\n";
        std::string traces = "N,snr_db,realization,iter,alpha\n";
        std::size_t failed_total = 0;

        for (double snr : cfg.snr_db) {
            for (std::size_t n : cfg.samples) {
                const auto res = run_scenario(cfg.cell(n, snr), std::max(1u, opts.threads));
                std::vector<double> m_auto, m_oracle, gap, a_auto, a_oracle;
                std::size_t failed = 0;
                for (const auto& r : res) {
                    const std::string status =
                        r.ok() ? to_string(r.trace.status) : to_string(*r.error_kind);
                    results += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", n,
                                           format_number(snr), r.index, format_number(r.alpha_auto),
                                           format_number(r.m_auto), format_number(r.alpha_oracle),
                                           format_number(r.m_oracle), r.trace.steps.size(), status,
                                           format_number(floor), csv_field(r.error));
                    const auto alphas = r.trace.alphas();
                    for (std::size_t i = 0; i < alphas.size() && !r.trace.steps.empty(); ++i) {
                        traces += fmt::format("{},{},{},{},{}\n", n, format_number(snr), r.index, i,
                                              format_number(alphas[i]));
                    }
                    if (!r.ok()) {
                        ++failed;
                        continue;
                    }
                    m_auto.push_back(r.m_auto);
                    m_oracle.push_back(r.m_oracle);
                    gap.push_back(r.m_auto - r.m_oracle);
                    a_auto.push_back(r.alpha_auto);
                    a_oracle.push_back(r.alpha_oracle);
                }
                failed_total += failed;
                summary += fmt::format(
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", n, format_number(snr), res.size(),
                    failed, format_number(mean_of(m_auto)), format_number(median_of(m_auto)),
                    format_number(mean_of(m_oracle)), format_number(median_of(m_oracle)),
                    format_number(median_of(gap)), format_number(mean_of(a_auto)),
                    format_number(median_of(a_auto)), format_number(mean_of(a_oracle)),
                    format_number(median_of(a_oracle)), format_number(floor));
            }
        }

        ensure_dir(opts.out_dir);
        write_text(opts.out_dir / "results.csv", results);
        write_text(opts.out_dir / "summary.csv", summary);
        write_text(opts.out_dir / "traces.csv", traces);
        ordered_json config = cfg.to_json();
        config["threads"] = opts.threads;
        write_manifest(opts.out_dir, "experiment", config, cfg.seed,
                       {"results.csv", "summary.csv", "traces.csv"}, started);

        out << fmt::format("{} cells x {} realizations written to {}",
                           cfg.samples.size() * cfg.snr_db.size(), cfg.realizations,
                           opts.out_dir.string());
        if (failed_total) out << fmt::format(" ({} realizations failed)", failed_total);
        out << "\n";
        return static_cast<int>(kExitOk);
    });
}

// plot -----------------------------------------------------------------------

namespace {

std::vector<int> require_columns(const CsvTable& t, std::initializer_list<const char*> names) {
    std::vector<int> idx;
    std::vector<std::string> missing;
    for (const char* name : names) {
        idx.push_back(t.column(name));
        if (idx.back() < 0) missing.emplace_back(name);
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw UsageError(fmt::format("CSV is missing required column(s): {}", list));
    }
    return idx;
}

// Per-SNR realization clouds plus averages, for either misalignment or alpha.
Chart versus_n_chart(const CsvTable& t, bool alpha) {
    const auto idx = require_columns(
        t, {"N", "snr_db", "realization", alpha ? "alpha_auto" : "m_auto_db",
            alpha ? "alpha_oracle" : "m_oracle_db"});

    // snr -> realization -> N -> (auto, oracle)
    std::map<double, std::map<double, std::map<double, std::pair<double, double>>>> cells;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        cells[t.number(r, idx[1])][t.number(r, idx[2])][t.number(r, idx[0])] = {
            t.number(r, idx[3]), t.number(r, idx[4])};
    }

    Chart chart;
    chart.title = alpha ? "Regularization parameter vs N" : "Misalignment vs N";
    chart.x_label = "N (samples)";
    chart.y_label = alpha ? "alpha" : "misalignment (dB)";
    chart.log_x = true;
    chart.log_y = alpha;

    std::size_t color = 0;
    for (const auto& [snr, by_real] : cells) {
        const std::string& c = palette(color++);
        std::map<double, std::vector<double>> auto_avg, oracle_avg;
        for (const auto& [real, by_n] : by_real) {
            Series sa{{}, {}, c, 0.6, true, 0.35, ""};
            Series so{{}, {}, c, 0.6, false, 0.35, ""};
            for (const auto& [n, vals] : by_n) {
                sa.x.push_back(n);
                sa.y.push_back(vals.first);
                so.x.push_back(n);
                so.y.push_back(vals.second);
                if (std::isfinite(vals.first)) auto_avg[n].push_back(vals.first);
                if (std::isfinite(vals.second)) oracle_avg[n].push_back(vals.second);
            }
            chart.series.push_back(std::move(sa));
            chart.series.push_back(std::move(so));
        }
        Series ta{{}, {}, c, 2.5, true, 1.0, fmt::format("SNR {:g} dB, auto", snr)};
        Series to{{}, {}, c, 2.5, false, 1.0, fmt::format("SNR {:g} dB, oracle", snr)};
        for (const auto& [n, v] : auto_avg) {
            ta.x.push_back(n);
            ta.y.push_back(mean_of(v));
        }
        for (const auto& [n, v] : oracle_avg) {
            to.x.push_back(n);
            to.y.push_back(mean_of(v));
        }
        chart.series.push_back(std::move(ta));
        chart.series.push_back(std::move(to));
    }
    return chart;
}

Chart alpha_trace_chart(const CsvTable& t) {
    const auto idx = require_columns(t, {"iter", "alpha"});
    const int cols[] = {t.column("N"), t.column("snr_db"), t.column("realization")};

    std::map<std::vector<double>, Series> groups;
    std::map<double, std::vector<double>> per_iter;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        std::vector<double> key;
        for (int c : cols) key.push_back(c >= 0 ? t.number(r, c) : 0.0);
        Series& s = groups[key];
        s.color = palette(0);
        s.dashed = true;
        const double it = t.number(r, idx[0]);
        const double a = t.number(r, idx[1]);
        s.x.push_back(it);
        s.y.push_back(a);
        if (std::isfinite(a)) per_iter[it].push_back(a);
    }

    Chart chart;
    chart.title = "Fixed-point iterates";
    chart.x_label = "iteration i";
    chart.y_label = "alpha(i)";
    chart.log_y = true;
    for (auto& [key, s] : groups) chart.series.push_back(std::move(s));
    Series avg{{}, {}, palette(1), 2.5, false, 1.0, "average"};
    for (const auto& [it, v] : per_iter) {
        avg.x.push_back(it);
        avg.y.push_back(mean_of(v));
    }
    chart.series.push_back(std::move(avg));
    return chart;
}

}  // namespace

int cmd_plot(const PlotOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (opts.kind != "misalignment-vs-N" && opts.kind != "alpha-vs-N" &&
            opts.kind != "alpha-trace") {
            throw UsageError(fmt::format(
                "unknown plot kind '{}' (misalignment-vs-N, alpha-vs-N, alpha-trace)", opts.kind));
        }
        const CsvTable table = parse_csv(read_text(opts.csv_path));
        if (table.rows.empty()) {
            throw UsageError(fmt::format("{}: no data rows", opts.csv_path.string()));
        }
        Chart chart;
        if (opts.kind == "alpha-trace") {
            chart = alpha_trace_chart(table);
        } else {
            chart = versus_n_chart(table, opts.kind == "alpha-vs-N");
        }
        const std::string svg = render_svg(chart);
        if (opts.out_path.has_parent_path()) ensure_dir(opts.out_path.parent_path());
        write_text(opts.out_path, svg);
        out << "wrote " << opts.out_path.string() << "\n";
        return static_cast<int>(kExitOk);
    });
}

// entry point ----------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Automatic regularization of Wiener filters by evidence maximization",
                 "autoreg"};
    app.set_version_flag("--version", AUTOREG_VERSION);
    app.require_subcommand(1);

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Estimate a filter and its regularization from data");
    fit_cmd->add_option("--x", fit.x_path, "Input samples (.csv or .f64)")->required();
    fit_cmd->add_option("--d", fit.d_path, "Desired samples (.csv or .f64)")->required();
    fit_cmd->add_option("--L", fit.window, "Filter length")->required()->check(CLI::PositiveNumber);
    fit_cmd->add_option("--alpha0", fit.alpha0, "Initial regularization")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    fit_cmd->add_option("--iters", fit.iters, "Fixed-point iterations")->capture_default_str();
    fit_cmd->add_option("--rel-tol", fit.rel_tol, "Early-stop relative tolerance (<= 0 disables)")
        ->capture_default_str();
    fit_cmd->add_option("--out", fit.out_dir, "Output directory")->capture_default_str();

    ExperimentOptions exp;
    auto* exp_cmd = app.add_subcommand("experiment", "Run a synthetic identification sweep");
    exp_cmd->add_option("--config", exp.config_path, "Experiment JSON config")->required();
    exp_cmd->add_option("--out", exp.out_dir, "Output directory")->capture_default_str();
    exp_cmd->add_option("--threads", exp.threads, "Worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    PlotOptions plot;
    auto* plot_cmd = app.add_subcommand("plot", "Render experiment or trace CSV as SVG");
    plot_cmd->add_option("--csv", plot.csv_path, "Input CSV")->required();
    plot_cmd->add_option("--kind", plot.kind, "misalignment-vs-N | alpha-vs-N | alpha-trace")
        ->required();
    plot_cmd->add_option("--out", plot.out_path, "Output SVG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    if (*fit_cmd) return cmd_fit(fit, out, err);
    if (*exp_cmd) return cmd_experiment(exp, out, err);
    return cmd_plot(plot, out, err);
}

}  // namespace autoreg::cli
