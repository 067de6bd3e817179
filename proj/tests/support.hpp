#pragma once

// Shared fixtures and brute-force oracles for the test suites. Nothing here
// goes through the eigen-domain code paths being checked.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "autoreg/estimation.hpp"
#include "autoreg/linalg.hpp"
#include "autoreg/rng.hpp"

namespace autoreg::testing {

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double rel_diff(const Vector& a, const Vector& b) {
    const double scale = std::max(a.norm(), b.norm());
    return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

inline Matrix random_symmetric(Eigen::Index n, std::uint64_t seed) {
    GaussianSource g(seed);
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) a(i, j) = a(j, i) = g();
    return a;
}

inline Matrix random_psd(Eigen::Index n, Eigen::Index rank, std::uint64_t seed) {
    GaussianSource g(seed);
    Matrix b(n, rank);
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = g();
    return b * b.transpose() / static_cast<double>(rank);
}

/// Random system-identification data: AR(1)-ish coloured input, random
/// filter of length `l`, additive white noise of standard deviation `noise`.
inline SignalPair random_signal(std::size_t l, std::size_t n, double noise, std::uint64_t seed,
                                double a = 0.7) {
    GaussianSource g(seed);
    std::vector<double> full(n + l - 1);
    double state = 0.0;
    for (int i = 0; i < 50; ++i) state = a * state + g();
    for (auto& v : full) v = state = a * state + g();
    std::vector<double> h(l);
    for (std::size_t k = 0; k < l; ++k) h[k] = g() * std::exp(-static_cast<double>(k) / (0.3 * l + 1));
    std::vector<double> d(n);
    for (std::size_t t = 0; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k < l; ++k) acc += h[k] * full[t + l - 1 - k];
        d[t] = acc + noise * g();
    }
    std::vector<double> pre(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(l - 1));
    std::vector<double> x(full.begin() + static_cast<std::ptrdiff_t>(l - 1), full.end());
    return SignalPair(std::move(pre), std::move(x), std::move(d), l);
}

inline Vector as_vector(std::span<const double> s) {
    return Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(s.size()));
}

/// Dense (1/N) ||d - X^T w||^2 from the explicit data matrix.
inline double direct_residual(const SignalPair& sig, const Vector& w) {
    const Matrix x = data_matrix(sig);
    const Vector d = as_vector(sig.d());
    return (d - x.transpose() * w).squaredNorm() / static_cast<double>(sig.samples());
}

/// log N(d; 0, v_w X^T X + v_e I) through an N x N Cholesky factorization.
inline double dense_log_evidence(const SignalPair& sig, double v_e, double v_w) {
    const Matrix x = data_matrix(sig);
    const Vector d = as_vector(sig.d());
    const auto n = static_cast<Eigen::Index>(sig.samples());
    Matrix c = v_w * x.transpose() * x;
    c.diagonal().array() += v_e;
    Eigen::LLT<Matrix> llt(c);
    const Matrix lower = llt.matrixL();
    const double log_det = 2.0 * lower.diagonal().array().log().sum();
    const Vector white = llt.matrixL().solve(d);
    return -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) + log_det +
                   white.squaredNorm());
}

}  // namespace autoreg::testing
