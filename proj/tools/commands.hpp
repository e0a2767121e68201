#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace harmosc::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kNumerical = 2 };

struct DesignOptions {
    std::string spec_path;
    std::string out_dir;
};

struct SimulateOptions {
    std::string coeffs_path;
    std::string input_path;  // empty: unit impulse at t=0
    double t_end = 200.0;
    double dt = 0.01;
    std::string format = "csv";
    std::string out_dir;
};

struct AnalyzeOptions {
    std::string signal_path;
    std::size_t window = 4096;
    std::size_t hop = 0;                 // 0: window / 8
    std::optional<double> discard;      // default: half the duration
    std::string out_dir;
};

struct PipelineOptions {
    std::vector<std::string> config_paths;
    std::string out_dir = "out";
};

// Each command writes its primary JSON/CSV to `out` and returns the exit code.
// Errors are reported as JSON on `out` as well.
int run_design(const DesignOptions& opts, std::ostream& out);
int run_simulate(const SimulateOptions& opts, std::ostream& out);
int run_analyze(const AnalyzeOptions& opts, std::ostream& out);
int run_pipeline(const PipelineOptions& opts, std::ostream& out);

}  // namespace harmosc::cli
