#include "autoreg/wiener.hpp"

#include <cmath>

#include <fmt/format.h>

#include "autoreg/error.hpp"

namespace autoreg {

namespace {

// lambda + alpha must be strictly positive in every direction.
void check_shift(const Vector& lambda, double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("regularization must be finite and >= 0, got {}", alpha));
    }
    const double smallest = lambda.size() > 0 ? lambda.minCoeff() : 0.0;
    if (!(smallest + alpha > 0.0)) {
        throw Error(ErrorKind::Singular,
                    fmt::format("singular system at alpha = {}: smallest eigenvalue {:.3g}", alpha,
                                smallest));
    }
}

}  // namespace

EigenStats to_eigen_domain(const SampleStats& stats) {
    EigenDecomposition eig = sym_eig_psd(stats.r_x);
    EigenStats es;
    es.z_xd = eig.basis.transpose() * stats.r_xd;
    es.lambda = std::move(eig.eigenvalues);
    es.basis = std::move(eig.basis);
    es.d_energy = stats.d_energy;
    es.samples = stats.samples;
    es.window = stats.window;
    es.form = stats.form;
    return es;
}

WienerSolution solve_wiener(const EigenStats& es, double alpha) {
    check_shift(es.lambda, alpha);
    const Vector scaled = es.z_xd.array() / (es.lambda.array() + alpha);
    return WienerSolution{es.basis * scaled, alpha};
}

ResidualEnergy residual_energy(const EigenStats& es, double alpha) {
    check_shift(es.lambda, alpha);
    const auto lam = es.lambda.array();
    const auto z2 = es.z_xd.array().square();
    const double explained = (z2 * (lam + 2.0 * alpha) / (lam + alpha).square()).sum();
    const double mean_energy = es.d_energy / static_cast<double>(es.samples);

    ResidualEnergy out;
    out.raw = mean_energy - explained;
    out.value = out.raw;
    if (out.raw < 0.0) {
        out.clamped = true;
        out.inconsistent = out.raw < -kResidualClamp * mean_energy;
        out.value = 0.0;
    }
    return out;
}

double residual_energy_per_sample(const EigenStats& es, double alpha) {
    return residual_energy(es, alpha).value;
}

double trace_inverse(const Vector& lambda, double alpha) {
    check_shift(lambda, alpha);
    return (1.0 / (lambda.array() + alpha)).sum();
}

double w_norm_sq(const EigenStats& es, double alpha) {
    check_shift(es.lambda, alpha);
    return (es.z_xd.array().square() / (es.lambda.array() + alpha).square()).sum();
}

PosteriorCovariance posterior_covariance(const SampleStats& stats, double alpha, double v_e) {
    if (!(alpha > 0.0) || !(v_e >= 0.0) || !std::isfinite(v_e)) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("posterior covariance needs alpha > 0 and v_e >= 0 (got {}, {})",
                                alpha, v_e));
    }
    Matrix k = regularized_inverse(stats.r_x, alpha);
    k *= v_e / static_cast<double>(stats.samples);
    return PosteriorCovariance{SymmetricMatrix(k), v_e};
}

}  // namespace autoreg
