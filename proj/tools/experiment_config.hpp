#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "autoreg/experiments.hpp"

namespace autoreg::cli {

/// Sweep over (N, SNR) cells sharing one impulse response. Mirrors the
/// ScenarioConfig fields; N and snr_db may be scalars or lists.
struct ExperimentConfig {
    std::size_t l_star = 64;
    std::size_t window = 64;
    double ar_coeff = 0.9;
    std::vector<std::size_t> samples;
    std::vector<double> snr_db;
    std::size_t realizations = 20;
    double alpha0 = 0.5;
    std::size_t iters = 5;
    double rel_tol = 1e-6;
    std::uint64_t seed = 1;
    double impulse_decay = 0.0;  // 0: L* / 4
    std::uint64_t impulse_seed = 7;
    std::size_t oracle_grid_points = 200;

    ImpulseResponse impulse() const;
    ScenarioConfig cell(std::size_t samples, double snr_db) const;
    nlohmann::ordered_json to_json() const;
};

/// Parses and validates. Throws UsageError listing every problem found.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);

}  // namespace autoreg::cli
