#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace harmosc::cli;
    CLI::App app{"Design, simulate and analyse harmonic LTI oscillators"};
    app.require_subcommand(1);

    DesignOptions design;
    auto* design_cmd = app.add_subcommand("design", "Solve for oscillator coefficients and verify the roots");
    design_cmd->add_option("--spec", design.spec_path, "Design spec JSON")->required()->check(CLI::ExistingFile);
    design_cmd->add_option("--out-dir", design.out_dir, "Also write coefficients.json and design_report.json here");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate the canonical realization of 1/Δ(s)");
    sim_cmd->add_option("--coeffs", sim.coeffs_path, "JSON with a 'coefficients' array (ascending powers)")
        ->required()
        ->check(CLI::ExistingFile);
    sim_cmd->add_option("--input", sim.input_path, "Input spec JSON (default: unit impulse at t=0)")
        ->check(CLI::ExistingFile);
    sim_cmd->add_option("--t-end", sim.t_end, "Horizon in seconds")->capture_default_str();
    sim_cmd->add_option("--dt", sim.dt, "Integration step in seconds")->capture_default_str();
    sim_cmd->add_option("--format", sim.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sim_cmd->add_option("--out-dir", sim.out_dir, "Write signal.csv/json here instead of stdout");

    AnalyzeOptions an;
    double discard = -1.0;
    auto* an_cmd = app.add_subcommand("analyze", "Steady oscillation, transient decay and spectrogram of a signal");
    an_cmd->add_option("signal", an.signal_path, "Signal CSV (t,y) or JSON")->required()->check(CLI::ExistingFile);
    an_cmd->add_option("--window", an.window, "Spectrogram window in samples")->capture_default_str();
    an_cmd->add_option("--hop", an.hop, "Spectrogram hop in samples (default window/8)");
    an_cmd->add_option("--discard", discard, "Seconds of transient to skip for the steady estimate (default half)");
    an_cmd->add_option("--out-dir", an.out_dir, "Write report.json, spectrogram.csv and analytic.csv here");

    PipelineOptions pipe;
    auto* pipe_cmd = app.add_subcommand("pipeline", "Run design -> simulate -> analyze for scenario configs");
    pipe_cmd->add_option("configs", pipe.config_paths, "Scenario config JSON files")->required()->check(CLI::ExistingFile);
    pipe_cmd->add_option("--out-dir", pipe.out_dir, "Root directory for per-scenario artifacts")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (*design_cmd) return run_design(design, std::cout);
    if (*sim_cmd) return run_simulate(sim, std::cout);
    if (*an_cmd) {
        if (discard >= 0.0) an.discard = discard;
        return run_analyze(an, std::cout);
    }
    return run_pipeline(pipe, std::cout);
}
