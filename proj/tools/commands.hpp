#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace autoreg::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitNumerical = 1,
    kExitUsage = 2,
    kExitIo = 3,
};

struct FitOptions {
    std::filesystem::path x_path;
    std::filesystem::path d_path;
    std::size_t window = 0;
    double alpha0 = 0.5;
    std::size_t iters = 5;
    double rel_tol = 1e-6;
    std::filesystem::path out_dir = "fit_out";
};

struct ExperimentOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir = "experiment_out";
    unsigned threads = 1;
};

struct PlotOptions {
    std::filesystem::path csv_path;
    std::string kind;
    std::filesystem::path out_path;
};

// Each command reports diagnostics on `err` and returns an ExitCode.
int cmd_fit(const FitOptions& opts, std::ostream& out, std::ostream& err);
int cmd_experiment(const ExperimentOptions& opts, std::ostream& out, std::ostream& err);
int cmd_plot(const PlotOptions& opts, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace autoreg::cli
