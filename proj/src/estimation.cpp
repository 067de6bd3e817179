#include "autoreg/estimation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "autoreg/error.hpp"

namespace autoreg {

namespace {

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double s) { return std::isfinite(s); });
}

}  // namespace

SignalPair::SignalPair(std::vector<double> x_pre, std::vector<double> x, std::vector<double> d,
                       std::size_t window)
    : x_pre_(std::move(x_pre)), x_(std::move(x)), d_(std::move(d)), window_(window) {
    if (window_ < 1) {
        throw Error(ErrorKind::InvalidInput, "window length must be >= 1");
    }
    if (x_.empty()) {
        throw Error(ErrorKind::InvalidInput, "at least one sample is required");
    }
    if (x_.size() != d_.size()) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("length mismatch: x has {} samples, d has {}", x_.size(),
                                d_.size()));
    }
    if (x_pre_.size() != window_ - 1) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("prehistory has {} samples, expected L-1 = {}", x_pre_.size(),
                                window_ - 1));
    }
    if (!all_finite(x_pre_) || !all_finite(x_) || !all_finite(d_)) {
        throw Error(ErrorKind::InvalidInput, "signal contains non-finite samples");
    }
}

SignalPair zero_prehistory(std::vector<double> x, std::vector<double> d, std::size_t window) {
    if (window < 1) {
        throw Error(ErrorKind::InvalidInput, "window length must be >= 1");
    }
    return SignalPair(std::vector<double>(window - 1, 0.0), std::move(x), std::move(d), window);
}

SampleStats build_stats(const SignalPair& sig) {
    const std::size_t n = sig.samples();
    const std::size_t l = sig.window();
    const auto window_len = static_cast<std::ptrdiff_t>(l);

    // Accumulate in extended precision; the eigen-domain residual identity
    // cancels large terms at high SNR.
    std::vector<long double> cov(l * l, 0.0L);
    std::vector<long double> cross(l, 0.0L);
    long double energy = 0.0L;
    std::vector<double> win(l);

    const auto d = sig.d();
    for (std::size_t t = 0; t < n; ++t) {
        const auto tt = static_cast<std::ptrdiff_t>(t);
        for (std::ptrdiff_t k = 0; k < window_len; ++k) {
            win[static_cast<std::size_t>(k)] = sig.input_at(tt - k);
        }
        const long double dt = d[t];
        energy += dt * dt;
        for (std::size_t i = 0; i < l; ++i) {
            const long double xi = win[i];
            cross[i] += xi * dt;
            long double* row = &cov[i * l];
            for (std::size_t j = i; j < l; ++j) {
                row[j] += xi * win[j];
            }
        }
    }

    const long double inv_n = 1.0L / static_cast<long double>(n);
    Matrix r(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
    Vector rxd(static_cast<Eigen::Index>(l));
    for (std::size_t i = 0; i < l; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        rxd[ii] = static_cast<double>(cross[i] * inv_n);
        for (std::size_t j = i; j < l; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const double v = static_cast<double>(cov[i * l + j] * inv_n);
            r(ii, jj) = v;
            r(jj, ii) = v;
        }
    }
    return SampleStats{SymmetricMatrix(r), std::move(rxd), static_cast<double>(energy), n, l,
                       StatsForm::SampleAverage};
}

SampleStats expectation_stats(const Matrix& r_x, const Vector& r_xd, double d_energy,
                              std::size_t samples) {
    if (samples < 1) {
        throw Error(ErrorKind::InvalidInput, "sample count must be >= 1");
    }
    if (r_xd.size() != r_x.rows()) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("r_xd has length {}, expected {}", r_xd.size(), r_x.rows()));
    }
    if (!r_xd.allFinite() || !std::isfinite(d_energy) || d_energy < 0.0) {
        throw Error(ErrorKind::InvalidInput, "statistics must be finite with d_energy >= 0");
    }
    SymmetricMatrix sym(r_x);
    const auto l = static_cast<std::size_t>(sym.order());
    return SampleStats{std::move(sym), r_xd, d_energy, samples, l, StatsForm::Expectation};
}

Matrix data_matrix(const SignalPair& sig) {
    const auto l = static_cast<Eigen::Index>(sig.window());
    const auto n = static_cast<Eigen::Index>(sig.samples());
    Matrix x(l, n);
    for (Eigen::Index t = 0; t < n; ++t) {
        for (Eigen::Index k = 0; k < l; ++k) {
            x(k, t) = sig.input_at(static_cast<std::ptrdiff_t>(t - k));
        }
    }
    return x;
}

}  // namespace autoreg
