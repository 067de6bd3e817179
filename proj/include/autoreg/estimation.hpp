#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "autoreg/linalg.hpp"

namespace autoreg {

/// Input/desired samples for a length-L filter. `x_pre` holds the input
/// prehistory x(-L+1) ... x(-1) in time order, so the window at t = 0 is
/// [x(0), x_pre[L-2], ..., x_pre[0]].
class SignalPair {
public:
    SignalPair(std::vector<double> x_pre, std::vector<double> x, std::vector<double> d,
               std::size_t window);

    std::span<const double> x_pre() const noexcept { return x_pre_; }
    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> d() const noexcept { return d_; }
    std::size_t samples() const noexcept { return x_.size(); }
    std::size_t window() const noexcept { return window_; }

    /// x(t) for t in [-(L-1), N).
    double input_at(std::ptrdiff_t t) const noexcept {
        return t >= 0 ? x_[static_cast<std::size_t>(t)]
                      : x_pre_[x_pre_.size() + static_cast<std::size_t>(t)];
    }

private:
    std::vector<double> x_pre_;
    std::vector<double> x_;
    std::vector<double> d_;
    std::size_t window_;
};

/// Builds a SignalPair whose prehistory is all zeros.
SignalPair zero_prehistory(std::vector<double> x, std::vector<double> d, std::size_t window);

/// How the second-order statistics were obtained. Only sample averages
/// over observed windows support the marginal-likelihood identities.
enum class StatsForm { SampleAverage, Expectation };

struct SampleStats {
    SymmetricMatrix r_x;   // (1/N) sum x(t) x(t)^T
    Vector r_xd;           // (1/N) sum x(t) d(t)
    double d_energy = 0.0; // sum d(t)^2
    std::size_t samples = 0;
    std::size_t window = 0;
    StatsForm form = StatsForm::SampleAverage;
};

SampleStats build_stats(const SignalPair& sig);

/// Wraps user-supplied (e.g. analytic) statistics. Validates shapes and
/// finiteness; R_x is not checked for PSD here.
SampleStats expectation_stats(const Matrix& r_x, const Vector& r_xd, double d_energy,
                              std::size_t samples);

/// Data matrix X = [x(0) ... x(N-1)], L x N. Dense; meant for small problems
/// and verification.
Matrix data_matrix(const SignalPair& sig);

}  // namespace autoreg
