#pragma once

#include <cstddef>

#include "autoreg/estimation.hpp"
#include "autoreg/linalg.hpp"

namespace autoreg {

/// Sample statistics rotated into the eigenbasis of R_x. Computed once per
/// data set; every quantity the regularization search needs is then O(L).
struct EigenStats {
    Vector lambda;   // eigenvalues of R_x, non-increasing, >= 0
    Vector z_xd;     // Q^T r_xd
    Matrix basis;    // Q
    double d_energy = 0.0;
    std::size_t samples = 0;
    std::size_t window = 0;
    StatsForm form = StatsForm::SampleAverage;
};

EigenStats to_eigen_domain(const SampleStats& stats);

struct WienerSolution {
    Vector w_hat;
    double alpha = 0.0;
};

/// w = Q diag(1 / (lambda + alpha)) z_xd.
WienerSolution solve_wiener(const EigenStats& es, double alpha);

/// Residual energy per sample with its diagnostics. `raw` is the unclamped
/// eigen-domain value; `clamped` is set when it was negative.
struct ResidualEnergy {
    double value = 0.0;
    double raw = 0.0;
    bool clamped = false;
    /// Negative by more than roundoff. Only possible for expectation-form
    /// statistics, where the identity need not hold.
    bool inconsistent = false;
};

/// Roundoff band for negative residuals, relative to ||d||^2 / N.
inline constexpr double kResidualClamp = 1e-12;

ResidualEnergy residual_energy(const EigenStats& es, double alpha);

/// (1/N) ||d - X^T w(alpha)||^2 via the eigen-domain identity, clamped at 0.
double residual_energy_per_sample(const EigenStats& es, double alpha);

/// Tr((R_x + alpha I)^{-1}) = sum 1 / (lambda + alpha).
double trace_inverse(const Vector& lambda, double alpha);

/// ||w(alpha)||^2 = sum z^2 / (lambda + alpha)^2.
double w_norm_sq(const EigenStats& es, double alpha);

struct PosteriorCovariance {
    SymmetricMatrix k;
    double v_e = 0.0;
};

/// K = (v_e / N) (R_x + alpha I)^{-1}.
PosteriorCovariance posterior_covariance(const SampleStats& stats, double alpha, double v_e);

}  // namespace autoreg
