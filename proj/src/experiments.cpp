#include "autoreg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "autoreg/error.hpp"
#include "autoreg/rng.hpp"

namespace autoreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_ar(double a) {
    if (!(std::abs(a) < 1.0)) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("AR(1) coefficient must satisfy |a| < 1, got {}", a));
    }
}

}  // namespace

std::size_t ARConfig::min_burn_in() const {
    check_ar(a);
    return static_cast<std::size_t>(std::ceil(10.0 / (1.0 - std::abs(a))));
}

std::vector<double> gen_ar1(std::size_t n, const ARConfig& cfg) {
    const std::size_t burn = std::max(cfg.burn_in, cfg.min_burn_in());
    GaussianSource noise(cfg.seed);

    // Start from the stationary marginal, then run the burn-in on top.
    double x = noise() / std::sqrt(1.0 - cfg.a * cfg.a);
    for (std::size_t i = 0; i < burn; ++i) x = cfg.a * x + noise();

    std::vector<double> out(n);
    for (auto& v : out) {
        x = cfg.a * x + noise();
        v = x;
    }
    return out;
}

ImpulseResponse synth_impulse(std::size_t length, double decay, std::uint64_t seed) {
    if (length < 1 || !(decay > 0.0)) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("impulse needs length >= 1 and decay > 0 (got {}, {})", length,
                                decay));
    }
    GaussianSource g(seed);
    Vector h(static_cast<Eigen::Index>(length));
    for (Eigen::Index t = 0; t < h.size(); ++t) {
        h[t] = g() * std::exp(-static_cast<double>(t) / decay);
    }
    const double norm = h.norm();
    if (!(norm > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "synthesized impulse response has zero energy");
    }
    return ImpulseResponse{h / norm};
}

double calibrate_noise(const ImpulseResponse& impulse, double a, double snr_db) {
    check_ar(a);
    if (std::isinf(snr_db) && snr_db > 0.0) return 0.0;
    const Vector& h = impulse.h;
    const double var = 1.0 / (1.0 - a * a);
    double power = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        for (Eigen::Index j = 0; j < h.size(); ++j) {
            power += h[i] * h[j] * var * std::pow(a, static_cast<double>(std::abs(i - j)));
        }
    }
    return power / std::pow(10.0, snr_db / 10.0);
}

std::vector<std::string> ScenarioConfig::violations() const {
    std::vector<std::string> out;
    const std::size_t l_star = impulse.length();
    if (samples < 1) out.emplace_back("N must be >= 1");
    if (window < 1) out.emplace_back("L must be >= 1");
    if (l_star < 1) out.emplace_back("impulse response must have length >= 1");
    if (window > l_star) {
        out.push_back(fmt::format("L = {} exceeds L* = {}", window, l_star));
    }
    if (l_star >= 1 && !(impulse.h.norm() > 0.0)) {
        out.emplace_back("impulse response must have nonzero energy");
    }
    if (realizations < 1) out.emplace_back("realizations must be >= 1");
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) out.emplace_back("alpha0 must be > 0");
    if (std::isnan(snr_db) || snr_db == -kInf) out.emplace_back("snr_db must be a number");
    if (!(std::abs(ar_coeff) < 1.0)) out.emplace_back("AR coefficient must satisfy |a| < 1");
    if (oracle_grid_points < 1) out.emplace_back("oracle grid needs at least one point");
    if (std::isnan(rel_tol)) out.emplace_back("rel_tol must be a number");
    return out;
}

SignalPair simulate(const ScenarioConfig& scn, std::size_t index) {
    if (const auto bad = scn.violations(); !bad.empty()) {
        throw Error(ErrorKind::InvalidInput, fmt::format("invalid scenario: {}", bad.front()));
    }
    const std::size_t n = scn.samples;
    const std::size_t l = scn.window;
    const std::size_t l_star = scn.impulse.length();
    const std::size_t pre = l_star - 1;

    const ARConfig ar{scn.ar_coeff, 0, derive_seed(scn.seed, index, 0)};
    const std::vector<double> full = gen_ar1(pre + n, ar);

    const double noise_sd = std::sqrt(calibrate_noise(scn.impulse, scn.ar_coeff, scn.snr_db));
    GaussianSource noise(derive_seed(scn.seed, index, 1));

    const Vector& h = scn.impulse.h;
    std::vector<double> d(n);
    for (std::size_t t = 0; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k < l_star; ++k) {
            acc += h[static_cast<Eigen::Index>(k)] * full[t + pre - k];
        }
        d[t] = acc + noise_sd * noise();
    }

    std::vector<double> x_pre(full.begin() + static_cast<std::ptrdiff_t>(pre - (l - 1)),
                              full.begin() + static_cast<std::ptrdiff_t>(pre));
    std::vector<double> x(full.begin() + static_cast<std::ptrdiff_t>(pre), full.end());
    return SignalPair(std::move(x_pre), std::move(x), std::move(d), l);
}

double misalignment(const Vector& w_hat, const ImpulseResponse& impulse) {
    const Vector& h = impulse.h;
    const double h_norm = h.norm();
    if (!(h_norm > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "misalignment needs a nonzero impulse response");
    }
    if (w_hat.size() > h.size()) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("estimate has {} taps, impulse response only {}", w_hat.size(),
                                h.size()));
    }
    const Eigen::Index l = w_hat.size();
    const double err_sq =
        (w_hat - h.head(l)).squaredNorm() + h.tail(h.size() - l).squaredNorm();
    if (err_sq == 0.0) return -kInf;
    return 20.0 * std::log10(std::sqrt(err_sq) / h_norm);
}

double mismatch_floor(const ImpulseResponse& impulse, std::size_t window) {
    const Vector& h = impulse.h;
    const auto l = static_cast<Eigen::Index>(std::min<std::size_t>(window, impulse.length()));
    const double tail = h.tail(h.size() - l).norm();
    if (tail == 0.0) return -kInf;
    return 20.0 * std::log10(tail / h.norm());
}

std::vector<double> default_oracle_grid(double lambda_max, std::size_t points) {
    if (!(lambda_max > 0.0) || points < 1) {
        throw Error(ErrorKind::InvalidInput,
                    "oracle grid needs lambda_max > 0 and at least one point");
    }
    const double lo = std::log(1e-8 * lambda_max);
    const double hi = std::log(10.0 * lambda_max);
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        grid[i] = std::exp(lo + f * (hi - lo));
    }
    return grid;
}

OracleResult oracle_alpha(const EigenStats& es, const ImpulseResponse& impulse,
                          const std::vector<double>& grid, bool refine) {
    if (grid.empty()) {
        throw Error(ErrorKind::InvalidInput, "oracle grid is empty");
    }
    const auto eval = [&](double alpha) {
        return misalignment(solve_wiener(es, alpha).w_hat, impulse);
    };

    OracleResult best{grid.front(), eval(grid.front())};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double m = eval(grid[i]);
        if (m < best.misalignment || (m == best.misalignment && grid[i] < best.alpha)) {
            best = {grid[i], m};
        }
    }
    if (!refine) return best;

    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const auto pos = std::lower_bound(sorted.begin(), sorted.end(), best.alpha) - sorted.begin();
    const double lo = sorted[static_cast<std::size_t>(pos > 0 ? pos - 1 : pos)];
    const double hi = sorted[std::min<std::size_t>(static_cast<std::size_t>(pos) + 1,
                                                   sorted.size() - 1)];
    if (!(lo > 0.0) || !(lo < hi)) return best;

    // Golden-section search on log(alpha).
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::log(lo);
    double b = std::log(hi);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double mc = eval(std::exp(c));
    double md = eval(std::exp(d));
    for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
        if (mc <= md) {
            b = d;
            d = c;
            md = mc;
            c = b - inv_phi * (b - a);
            mc = eval(std::exp(c));
        } else {
            a = c;
            c = d;
            mc = md;
            d = a + inv_phi * (b - a);
            md = eval(std::exp(d));
        }
    }
    const double x = mc <= md ? c : d;
    const double mx = std::min(mc, md);
    if (mx < best.misalignment) best = {std::exp(x), mx};
    return best;
}

RealizationResult run_realization(const ScenarioConfig& scn, std::size_t index) {
    RealizationResult out;
    out.index = index;
    out.alpha_auto = out.m_auto = out.alpha_oracle = out.m_oracle = kNaN;

    const auto fail = [&](ErrorKind kind, const std::string& what) {
        out.error_kind = kind;
        out.error = what;
    };

    try {
        const EigenStats es = to_eigen_domain(build_stats(simulate(scn, index)));
        std::vector<double> grid =
            default_oracle_grid(es.lambda.maxCoeff(), scn.oracle_grid_points);
        try {
            out.trace = estimate_alpha(es, {scn.alpha0, scn.iters, scn.rel_tol});
            out.alpha_auto = out.trace.final_alpha;
            out.m_auto = misalignment(solve_wiener(es, out.alpha_auto).w_hat, scn.impulse);
            grid.push_back(out.alpha_auto);
        } catch (const IterationFailure& e) {
            out.trace = e.partial_trace();
            fail(e.kind(), e.what());
        }
        const OracleResult oracle = oracle_alpha(es, scn.impulse, grid);
        out.alpha_oracle = oracle.alpha;
        out.m_oracle = oracle.misalignment;
    } catch (const Error& e) {
        fail(e.kind(), e.what());
    }
    return out;
}

std::vector<RealizationResult> run_scenario(const ScenarioConfig& scn, unsigned threads) {
    if (const auto bad = scn.violations(); !bad.empty()) {
        throw Error(ErrorKind::InvalidInput, fmt::format("invalid scenario: {}", bad.front()));
    }
    std::vector<RealizationResult> results(scn.realizations);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < results.size(); i = next++) {
            results[i] = run_realization(scn, i);
        }
    };

    const unsigned workers =
        std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(results.size())));
    if (workers == 1) {
        worker();
        return results;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    pool.clear();
    return results;
}

}  // namespace autoreg
