#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "autoreg/estimation.hpp"
#include "autoreg/regularization.hpp"
#include "autoreg/wiener.hpp"

namespace autoreg {

/// AR(1) input x(t) = a x(t-1) + u(t), u ~ N(0, 1).
struct ARConfig {
    double a = 0.9;
    /// Samples discarded before output; raised to min_burn_in() if smaller.
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;

    std::size_t min_burn_in() const;
};

/// n samples of a stationary AR(1) sequence, deterministic in cfg.seed.
std::vector<double> gen_ar1(std::size_t n, const ARConfig& cfg);

struct ImpulseResponse {
    Vector h;

    std::size_t length() const noexcept { return static_cast<std::size_t>(h.size()); }
};

/// h(t) = g(t) exp(-t / decay) with g white Gaussian, scaled to unit norm.
/// Stands in for a measured room response.
ImpulseResponse synth_impulse(std::size_t length, double decay, std::uint64_t seed);

/// Noise variance giving the requested SNR for the AR(1) input, using the
/// ensemble power h^T R h with R_ij = a^|i-j| / (1 - a^2). Infinite SNR maps
/// to zero noise.
double calibrate_noise(const ImpulseResponse& impulse, double a, double snr_db);

struct ScenarioConfig {
    std::size_t samples = 1024;     // N
    std::size_t window = 64;        // L, filter length estimated
    ImpulseResponse impulse;        // true response, length L* >= L
    double snr_db = 20.0;
    std::size_t realizations = 1;
    double alpha0 = 0.5;
    std::size_t iters = 5;
    double rel_tol = 1e-6;
    std::uint64_t seed = 1;
    double ar_coeff = 0.9;
    std::size_t oracle_grid_points = 200;

    /// Every violated constraint, empty when valid.
    std::vector<std::string> violations() const;
};

/// One data set for realization `index`. The input carries L* - 1 true
/// prehistory samples; d is the full-length convolution plus noise, so
/// L < L* yields the mismatched model.
SignalPair simulate(const ScenarioConfig& scn, std::size_t index = 0);

/// 20 log10(||pad(w) - h|| / ||h||); -inf when the estimate is exact.
double misalignment(const Vector& w_hat, const ImpulseResponse& impulse);

/// 20 log10(||h_2|| / ||h||) where h_2 is the part of h beyond `window` taps.
/// -inf in the matched case.
double mismatch_floor(const ImpulseResponse& impulse, std::size_t window);

/// `points` values log-spaced over [1e-8 lambda_max, 10 lambda_max].
std::vector<double> default_oracle_grid(double lambda_max, std::size_t points = 200);

struct OracleResult {
    double alpha = 0.0;
    double misalignment = 0.0;
};

/// Misalignment-minimizing alpha over `grid`, smallest alpha on ties. With
/// `refine`, a golden-section search on log(alpha) over the bracket around
/// the best grid point replaces it if strictly better.
OracleResult oracle_alpha(const EigenStats& es, const ImpulseResponse& impulse,
                          const std::vector<double>& grid, bool refine = true);

struct RealizationResult {
    std::size_t index = 0;
    double alpha_auto = 0.0;
    double m_auto = 0.0;
    double alpha_oracle = 0.0;
    double m_oracle = 0.0;
    IterationTrace trace;
    std::optional<ErrorKind> error_kind;
    std::string error;

    bool ok() const noexcept { return !error_kind.has_value(); }
};

RealizationResult run_realization(const ScenarioConfig& scn, std::size_t index);

/// All realizations, ordered by index. `threads` only changes wall time.
std::vector<RealizationResult> run_scenario(const ScenarioConfig& scn, unsigned threads = 1);

}  // namespace autoreg
