#include "autoreg/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace autoreg {

const char* to_string(TraceStatus status) noexcept {
    switch (status) {
        case TraceStatus::Completed: return "completed";
        case TraceStatus::EarlyConverged: return "early-converged";
        case TraceStatus::DegenerateData: return "degenerate-data";
    }
    return "unknown";
}

HyperParams HyperParams::from_variances(double v_e, double v_w, std::size_t samples) {
    if (!(v_e > 0.0) || !(v_w > 0.0) || samples < 1) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("variances must be positive (v_e = {}, v_w = {})", v_e, v_w));
    }
    return HyperParams{v_e, v_w, v_e / (static_cast<double>(samples) * v_w)};
}

std::vector<double> IterationTrace::alphas() const {
    std::vector<double> out;
    out.reserve(steps.size() + 1);
    out.push_back(initial_alpha);
    for (std::size_t i = 1; i < steps.size(); ++i) out.push_back(steps[i].alpha);
    if (!steps.empty()) out.push_back(final_alpha);
    return out;
}

double effective_params(const Vector& lambda, double alpha) {
    if (!(alpha > 0.0)) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("effective parameter count needs alpha > 0, got {}", alpha));
    }
    return (lambda.array() / (lambda.array() + alpha)).sum();
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("alpha must be finite and > 0, got {}", alpha));
    }
}

// 0 < gamma < N is required for both variance updates.
void check_gamma(double gamma, std::size_t samples) {
    if (!(gamma > 0.0)) {
        throw Error(ErrorKind::DegenerateData,
                    "effective number of parameters is zero (R_x carries no signal)");
    }
    if (gamma >= static_cast<double>(samples)) {
        throw Error(ErrorKind::IllPosed,
                    fmt::format("ill-posed: effective number of parameters {:.6g} >= N = {}",
                                gamma, samples));
    }
}

void check_next(double alpha_next, double alpha) {
    if (!std::isfinite(alpha_next) || !(alpha_next > 0.0)) {
        throw Error(ErrorKind::NonFinite,
                    fmt::format("fixed-point update from alpha = {} produced {}", alpha,
                                alpha_next));
    }
}

}  // namespace

StepResult gm_step_eigen(const EigenStats& es, double alpha) {
    check_alpha(alpha);
    if (es.z_xd.cwiseAbs().maxCoeff() == 0.0) {
        throw Error(ErrorKind::DegenerateData, "degenerate data: no signal in r_xd");
    }
    const double n = static_cast<double>(es.samples);
    const auto lam = es.lambda.array();
    const auto z2 = es.z_xd.array().square();
    const auto shifted_sq = (lam + alpha).square();

    const double gamma = (lam / (lam + alpha)).sum();
    check_gamma(gamma, es.samples);

    const double mean_energy = es.d_energy / n;
    const double residual =
        std::max(mean_energy - (z2 * (lam + 2.0 * alpha) / shifted_sq).sum(),
                 kResidualFloor * mean_energy);
    const double w_norm = (z2 / shifted_sq).sum();

    const double alpha_next = residual / ((n / gamma - 1.0) * w_norm);
    check_next(alpha_next, alpha);

    RegState state;
    state.alpha = alpha;
    state.gamma = gamma;
    state.v_e = n * residual / (n - gamma);
    state.v_w = w_norm / gamma;
    return StepResult{alpha_next, state};
}

StepResult gm_step_matrix(const SampleStats& stats, double alpha) {
    check_alpha(alpha);
    if (stats.r_xd.cwiseAbs().maxCoeff() == 0.0) {
        throw Error(ErrorKind::DegenerateData, "degenerate data: no signal in r_xd");
    }
    const double n = static_cast<double>(stats.samples);
    const double l = static_cast<double>(stats.window);
    const Matrix& r = stats.r_x.matrix();

    const Vector w = solve_regularized(stats.r_x, alpha, stats.r_xd);
    const double gamma = l - alpha * regularized_inverse(stats.r_x, alpha).trace();
    check_gamma(gamma, stats.samples);

    // ||d - X^T w||^2 = ||d||^2 - 2 N w^T r_xd + N w^T R_x w
    const double sq_error =
        std::max(stats.d_energy - 2.0 * n * w.dot(stats.r_xd) + n * w.dot(r * w),
                 kResidualFloor * stats.d_energy);
    const double w_norm = w.squaredNorm();

    const double alpha_next = sq_error / (n * (n / gamma - 1.0) * w_norm);
    check_next(alpha_next, alpha);

    RegState state;
    state.alpha = alpha;
    state.gamma = gamma;
    state.v_e = sq_error / (n - gamma);
    state.v_w = w_norm / gamma;
    return StepResult{alpha_next, state};
}

IterationTrace estimate_alpha(const EigenStats& es, const EstimateOptions& opts) {
    check_alpha(opts.alpha0);
    IterationTrace trace;
    trace.initial_alpha = opts.alpha0;
    trace.final_alpha = opts.alpha0;
    trace.status = TraceStatus::Completed;

    double alpha = opts.alpha0;
    for (std::size_t i = 0; i < opts.max_iters; ++i) {
        StepResult step;
        try {
            step = gm_step_eigen(es, alpha);
        } catch (const Error& e) {
            trace.status = TraceStatus::DegenerateData;
            trace.final_alpha = alpha;
            throw IterationFailure(e.kind(), fmt::format("iteration {}: {}", i, e.what()),
                                   std::move(trace));
        }
        step.state.iter = i;
        trace.steps.push_back(step.state);
        const double change = std::abs(step.alpha_next - alpha);
        alpha = step.alpha_next;
        trace.final_alpha = alpha;
        if (opts.rel_tol > 0.0 && change <= opts.rel_tol * step.state.alpha) {
            trace.status = TraceStatus::EarlyConverged;
            break;
        }
    }
    return trace;
}

double log_evidence(const EigenStats& es, double v_e, double v_w) {
    if (es.form != StatsForm::SampleAverage) {
        throw Error(ErrorKind::InvalidInput,
                    "log evidence requires sample-average statistics built from data");
    }
    if (!(v_e > 0.0) || !(v_w > 0.0)) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("variances must be positive (v_e = {}, v_w = {})", v_e, v_w));
    }
    const double n = static_cast<double>(es.samples);
    const double l = static_cast<double>(es.window);
    const double alpha = v_e / (n * v_w);
    const auto lam = es.lambda.array();

    const double log_det = (n - l) * std::log(v_e) + (v_e + v_w * n * lam).log().sum();
    const double quad =
        (es.d_energy - n * (es.z_xd.array().square() / (lam + alpha)).sum()) / v_e;
    return -0.5 * (n * std::log(2.0 * std::numbers::pi) + log_det + quad);
}

HyperParams variance_updates(const EigenStats& es, double alpha, const Vector& w_hat) {
    check_alpha(alpha);
    if (w_hat.size() != es.lambda.size()) {
        throw Error(ErrorKind::InvalidInput,
                    fmt::format("filter has length {}, expected {}", w_hat.size(),
                                es.lambda.size()));
    }
    const double w_norm = w_hat.squaredNorm();
    if (!(w_norm > 0.0)) {
        throw Error(ErrorKind::DegenerateData, "degenerate data: estimated filter is zero");
    }
    const double n = static_cast<double>(es.samples);
    const double gamma = effective_params(es.lambda, alpha);
    check_gamma(gamma, es.samples);

    const double mean_energy = es.d_energy / n;
    const double residual =
        std::max(residual_energy(es, alpha).raw, kResidualFloor * mean_energy);
    const double v_e = n * residual / (n - gamma);
    const double v_w = w_norm / gamma;
    return HyperParams{v_e, v_w, v_e / (n * v_w)};
}

}  // namespace autoreg
