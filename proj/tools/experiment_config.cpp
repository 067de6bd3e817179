#include "experiment_config.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "io.hpp"

namespace autoreg::cli {

namespace {

const std::set<std::string> kKeys = {
    "L_star", "L",     "a",       "N",    "snr_db",        "realizations",      "alpha0",
    "iters",  "rel_tol", "seed",  "impulse_decay", "impulse_seed", "oracle_grid_points",
};

const std::set<std::string> kRequired = {"L_star", "L", "N", "snr_db"};

class Reader {
public:
    explicit Reader(const nlohmann::json& j) : j_(j) {}

    std::vector<std::string> problems;

    template <typename T>
    void unsigned_int(const char* key, T& out, std::size_t min) {
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
            problems.push_back(fmt::format("'{}' must be an integer >= {}", key, min));
            return;
        }
        out = v.get<T>();
    }

    void number(const char* key, double& out) {
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_number()) {
            problems.push_back(fmt::format("'{}' must be a number", key));
            return;
        }
        out = v.get<double>();
    }

    template <typename T, typename Check>
    void list(const char* key, std::vector<T>& out, Check check, const char* what) {
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        const auto take = [&](const nlohmann::json& e) {
            if (!check(e)) {
                problems.push_back(fmt::format("'{}' entries must be {}", key, what));
                return false;
            }
            out.push_back(e.get<T>());
            return true;
        };
        if (v.is_array()) {
            if (v.empty()) problems.push_back(fmt::format("'{}' must not be empty", key));
            for (const auto& e : v) {
                if (!take(e)) break;
            }
        } else {
            take(v);
        }
    }

private:
    const nlohmann::json& j_;
};

}  // namespace

ImpulseResponse ExperimentConfig::impulse() const {
    const double decay = impulse_decay > 0.0 ? impulse_decay : static_cast<double>(l_star) / 4.0;
    return synth_impulse(l_star, decay, impulse_seed);
}

ScenarioConfig ExperimentConfig::cell(std::size_t n, double snr) const {
    ScenarioConfig scn;
    scn.samples = n;
    scn.window = window;
    scn.impulse = impulse();
    scn.snr_db = snr;
    scn.realizations = realizations;
    scn.alpha0 = alpha0;
    scn.iters = iters;
    scn.rel_tol = rel_tol;
    scn.seed = seed;
    scn.ar_coeff = ar_coeff;
    scn.oracle_grid_points = oracle_grid_points;
    return scn;
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    j["L_star"] = l_star;
    j["L"] = window;
    j["a"] = ar_coeff;
    j["N"] = samples;
    j["snr_db"] = snr_db;
    j["realizations"] = realizations;
    j["alpha0"] = alpha0;
    j["iters"] = iters;
    j["rel_tol"] = rel_tol;
    j["seed"] = seed;
    j["impulse_decay"] = impulse_decay > 0.0 ? impulse_decay : static_cast<double>(l_star) / 4.0;
    j["impulse_seed"] = impulse_seed;
    j["oracle_grid_points"] = oracle_grid_points;
    return j;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
    if (!j.is_object()) throw UsageError("config: top level must be a JSON object");

    ExperimentConfig cfg;
    Reader r(j);
    for (const auto& [key, _] : j.items()) {
        if (!kKeys.contains(key)) r.problems.push_back(fmt::format("unknown key '{}'", key));
    }
    for (const auto& key : kRequired) {
        if (!j.contains(key)) r.problems.push_back(fmt::format("missing required key '{}'", key));
    }

    r.unsigned_int("L_star", cfg.l_star, 1);
    r.unsigned_int("L", cfg.window, 1);
    r.number("a", cfg.ar_coeff);
    r.list(
        "N", cfg.samples,
        [](const nlohmann::json& e) { return e.is_number_integer() && e.get<long long>() >= 1; },
        "integers >= 1");
    r.list(
        "snr_db", cfg.snr_db,
        [](const nlohmann::json& e) { return e.is_number(); }, "numbers");
    r.unsigned_int("realizations", cfg.realizations, 1);
    r.number("alpha0", cfg.alpha0);
    r.unsigned_int("iters", cfg.iters, 0);
    r.number("rel_tol", cfg.rel_tol);
    r.unsigned_int("seed", cfg.seed, 0);
    r.number("impulse_decay", cfg.impulse_decay);
    r.unsigned_int("impulse_seed", cfg.impulse_seed, 0);
    r.unsigned_int("oracle_grid_points", cfg.oracle_grid_points, 1);

    if (cfg.window > cfg.l_star) {
        r.problems.push_back(fmt::format("L = {} exceeds L_star = {}", cfg.window, cfg.l_star));
    }
    if (!(std::abs(cfg.ar_coeff) < 1.0)) r.problems.push_back("'a' must satisfy |a| < 1");
    if (!(cfg.alpha0 > 0.0)) r.problems.push_back("'alpha0' must be > 0");
    if (cfg.impulse_decay < 0.0) r.problems.push_back("'impulse_decay' must be > 0");

    if (!r.problems.empty()) {
        std::string msg = "invalid experiment config:";
        for (const auto& p : r.problems) msg += "\n  - " + p;
        throw UsageError(msg);
    }
    return cfg;
}

}  // namespace autoreg::cli
