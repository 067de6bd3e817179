#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "autoreg/error.hpp"
#include "autoreg/estimation.hpp"
#include "autoreg/wiener.hpp"

namespace autoreg {

/// Noise variance v_e and prior weight variance v_w; alpha = v_e / (N v_w).
struct HyperParams {
    double v_e = 0.0;
    double v_w = 0.0;
    double alpha = 0.0;

    static HyperParams from_variances(double v_e, double v_w, std::size_t samples);
};

/// State of one fixed-point step, evaluated at `alpha`. `v_e` and `v_w` are
/// the variance estimates that the step implies.
struct RegState {
    std::size_t iter = 0;
    double alpha = 0.0;
    double gamma = 0.0;
    double v_e = 0.0;
    double v_w = 0.0;
};

struct StepResult {
    double alpha_next = 0.0;
    RegState state;
};

enum class TraceStatus { Completed, EarlyConverged, DegenerateData };

const char* to_string(TraceStatus status) noexcept;

struct IterationTrace {
    double initial_alpha = 0.0;
    std::vector<RegState> steps;
    double final_alpha = 0.0;
    TraceStatus status = TraceStatus::Completed;

    /// alpha^(0), ..., alpha^(k) for k completed steps.
    std::vector<double> alphas() const;
};

/// Raised by estimate_alpha when a step fails; carries the steps completed
/// before the failure.
class IterationFailure : public Error {
public:
    IterationFailure(ErrorKind kind, const std::string& what, IterationTrace partial)
        : Error(kind, what), partial_(std::move(partial)) {}

    const IterationTrace& partial_trace() const noexcept { return partial_; }

private:
    IterationTrace partial_;
};

/// Lower bound on the residual term, relative to ||d||^2 / N.
inline constexpr double kResidualFloor = 1e-15;

/// gamma = sum lambda / (lambda + alpha), the effective number of parameters.
double effective_params(const Vector& lambda, double alpha);

/// One Gull-MacKay update in the eigen domain; O(L) per call.
StepResult gm_step_eigen(const EigenStats& es, double alpha);

/// Same update through explicit dense solves and a dense inverse trace.
/// Slow on purpose; kept as an independent reference.
StepResult gm_step_matrix(const SampleStats& stats, double alpha);

struct EstimateOptions {
    double alpha0 = 0.5;
    std::size_t max_iters = 5;
    /// Stop once |alpha' - alpha| <= rel_tol * alpha. Non-positive disables.
    double rel_tol = 1e-6;
};

IterationTrace estimate_alpha(const EigenStats& es, const EstimateOptions& opts = {});

/// Marginal log-likelihood log p(d | X, v_e, v_w) in closed form. Requires
/// statistics that are sample averages over the observed windows.
double log_evidence(const EigenStats& es, double v_e, double v_w);

/// Variance updates implied by the filter `w_hat` computed at `alpha`.
HyperParams variance_updates(const EigenStats& es, double alpha, const Vector& w_hat);

}  // namespace autoreg
