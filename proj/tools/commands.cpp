#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "harmosc/analysis.hpp"
#include "harmosc/designer.hpp"
#include "harmosc/error.hpp"
#include "harmosc/io.hpp"
#include "harmosc/lti.hpp"

namespace harmosc::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

// Error raised inside a named pipeline stage.
struct StageError {
    std::string stage;
    std::string code;
    std::string message;
    int exit_code;
};

int exit_code_for(const Error& e) {
    return category(e.code()) == ErrorCategory::Validation ? kValidation : kNumerical;
}

template <typename F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw StageError{stage, std::string(to_string(e.code())), e.what(), exit_code_for(e)};
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError{stage, "InvalidArgument", e.what(), kValidation};
    }
}

int report_error(std::ostream& out, const StageError& e, bool tag_stage) {
    out << io::error_json(e.code, e.message, tag_stage ? e.stage : std::string()).dump(2) << '\n';
    return e.exit_code;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    f << content;
}

fs::path prepare_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw Error(ErrorCode::InvalidArgument, "cannot create output directory " + dir);
    return p;
}

std::string signal_text(const Signal& s, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        os << json{{"t0", s.t0}, {"dt", s.dt}, {"y", s.samples}}.dump() << '\n';
    } else if (format == "csv") {
        io::write_signal_csv(os, s);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown format '" + format + "'");
    }
    return os.str();
}

Signal load_signal(const std::string& path) {
    if (fs::path(path).extension() == ".json") {
        const json j = io::read_json_file(path);
        if (!j.contains("dt") || !j.contains("y")) throw Error(ErrorCode::InvalidArgument, "signal JSON needs dt and y");
        Signal s{j.value("t0", 0.0), j.at("dt").get<double>(), j.at("y").get<std::vector<double>>()};
        check_signal(s);
        return s;
    }
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
    return io::read_signal_csv(in);
}

Signal simulate_poly(const Polynomial& poly, const InputSpec& input, double t_end, double dt) {
    const StateSpaceModel model = canonical_state_space(poly);
    return simulate(model, make_input(input, t_end, dt), t_end, dt);
}

struct Analysis {
    OscillationReport report;
    Spectrogram spec;
    AnalyticSignal orbit;
    std::vector<Ridge> ridges;
};

// The decay fit starts at `decay_from` (the last input event), since every
// input change re-excites the persistent mode.
Analysis analyze_signal(const Signal& s, std::size_t window, std::size_t hop, std::optional<double> discard,
                        double decay_from = 0.0) {
    if (hop == 0) hop = std::max<std::size_t>(1, window / 8);
    Analysis a;
    a.report.steady = estimate_steady(s, discard.value_or(0.5 * s.duration()));
    try {
        const auto first = static_cast<std::size_t>(std::llround((decay_from - s.t0) / s.dt));
        if (first == 0) {
            a.report.decay = estimate_decay(s, a.report.steady);
        } else {
            const Signal tail{s.time(first), s.dt,
                              std::vector<double>(s.samples.begin() + static_cast<std::ptrdiff_t>(first), s.samples.end())};
            a.report.decay = estimate_decay(tail, a.report.steady);
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoTransient) throw;
        a.report.flags.push_back("NoTransient");
    }
    a.spec = spectrogram(s, window, hop);
    a.ridges = find_ridges(a.spec);
    a.orbit = analytic(s);
    return a;
}

json analysis_json(const Analysis& a) {
    json j = io::to_json(a.report);
    json ridges = json::array();
    for (const Ridge& r : a.ridges) ridges.push_back(r.frequency_hz);
    j["ridges_hz"] = ridges;
    return j;
}

void write_analysis_files(const fs::path& dir, const Analysis& a) {
    write_file(dir / "report.json", analysis_json(a).dump(2) + "\n");
    std::ostringstream spec;
    io::write_spectrogram_csv(spec, a.spec);
    write_file(dir / "spectrogram.csv", spec.str());
    std::ostringstream orbit;
    io::write_analytic_csv(orbit, a.orbit);
    write_file(dir / "analytic.csv", orbit.str());
}

InputSpec default_input() { return ImpulseTrain{{Impulse{0.0, 1.0}}}; }

double last_event_time(const InputSpec& input) {
    if (const auto* i = std::get_if<ImpulseTrain>(&input); i && !i->impulses.empty()) return i->impulses.back().time;
    if (const auto* st = std::get_if<StepSchedule>(&input); st && !st->steps.empty()) return st->steps.back().start;
    return 0.0;
}

double number_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw Error(ErrorCode::InvalidArgument, std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

struct ScenarioOutcome {
    json summary;
    int exit_code = kOk;
};

ScenarioOutcome run_scenario(const std::string& config_path, const std::string& out_root) {
    ScenarioOutcome outcome;
    std::string name = fs::path(config_path).stem().string();
    try {
        const json cfg = in_stage("config", [&] { return io::read_json_file(config_path); });
        name = cfg.value("name", name);
        outcome.summary["name"] = name;

        const bool has_design = cfg.contains("design");
        const bool has_coeffs = cfg.contains("coefficients");
        std::optional<DesignSpec> spec;
        std::optional<double> expected_omega;
        std::optional<double> expected_bias;
        InputSpec input = default_input();
        double t_end = 200.0;
        double dt = 0.01;
        std::size_t window = 4096;
        std::size_t hop = 0;
        std::optional<double> discard;
        in_stage("config", [&] {
            if (has_design == has_coeffs) {
                throw Error(ErrorCode::InvalidArgument, "config needs exactly one of 'design' or 'coefficients'");
            }
            if (has_design) {
                spec = io::design_spec_from_json(cfg.at("design"));
                validate(*spec);
                expected_omega = spec->omega_k;
            }
            if (cfg.contains("input")) input = io::input_spec_from_json(cfg.at("input"));
            t_end = number_or(cfg, "t_end", t_end);
            dt = number_or(cfg, "dt", dt);
            if (cfg.contains("analysis")) {
                const json& an = cfg.at("analysis");
                window = static_cast<std::size_t>(number_or(an, "window", static_cast<double>(window)));
                hop = static_cast<std::size_t>(number_or(an, "hop", 0.0));
                if (an.contains("discard")) discard = number_or(an, "discard", 0.0);
            }
            if (cfg.contains("expect")) {
                const json& ex = cfg.at("expect");
                if (ex.contains("omega_k")) expected_omega = number_or(ex, "omega_k", 0.0);
                if (ex.contains("bias")) expected_bias = number_or(ex, "bias", 0.0);
            }
            return 0;
        });

        const fs::path dir = in_stage("config", [&] { return prepare_dir((fs::path(out_root) / name).string()); });

        const Polynomial poly = in_stage("design", [&] {
            if (!spec) return io::coefficients_from_json(cfg.at("coefficients"));
            const Polynomial p = design(*spec);
            const DesignReport report = verify_design(p, *spec);
            write_file(dir / "design_report.json", io::to_json(report).dump(2) + "\n");
            if (!report.verdict) throw Error(ErrorCode::VerificationFailed, "designed polynomial failed verification");
            return p;
        });
        const auto c = poly.coeffs();
        outcome.summary["coefficients"] = std::vector<double>(c.begin(), c.end());
        write_file(dir / "coefficients.json", json{{"coefficients", outcome.summary["coefficients"]}}.dump(2) + "\n");

        const Signal y = in_stage("simulate", [&] { return simulate_poly(poly, input, t_end, dt); });
        write_file(dir / "signal.csv", signal_text(y, "csv"));

        const Analysis a = in_stage("analyze", [&] { return analyze_signal(y, window, hop, discard, last_event_time(input)); });
        write_analysis_files(dir, a);

        const double omega_hat = a.report.steady.omega;
        bool pass = true;
        outcome.summary["omega_hat"] = omega_hat;
        outcome.summary["bias"] = a.report.steady.bias;
        outcome.summary["amplitude"] = a.report.steady.amplitude;
        outcome.summary["tau_s"] = a.report.decay ? json(a.report.decay->tau) : json(nullptr);
        outcome.summary["flags"] = a.report.flags;
        if (expected_omega) {
            const double rel = std::abs(omega_hat - *expected_omega) / *expected_omega;
            outcome.summary["omega_k"] = *expected_omega;
            outcome.summary["omega_rel_error"] = rel;
            pass = pass && rel <= 0.01;
        }
        if (expected_bias) {
            const double err = std::abs(a.report.steady.bias - *expected_bias);
            outcome.summary["expected_bias"] = *expected_bias;
            pass = pass && err <= 0.01 * std::max(1.0, std::abs(*expected_bias));
        }
        outcome.summary["status"] = pass ? "PASS" : "FAIL";
        outcome.exit_code = pass ? kOk : kNumerical;
        write_file(dir / "summary.json", outcome.summary.dump(2) + "\n");
    } catch (const StageError& e) {
        outcome.summary["name"] = name;
        outcome.summary["status"] = "ERROR";
        outcome.summary["error"] = io::error_json(e.code, e.message, e.stage);
        outcome.exit_code = e.exit_code;
    }
    return outcome;
}

}  // namespace

int run_design(const DesignOptions& opts, std::ostream& out) {
    try {
        const DesignSpec spec = in_stage("design", [&] { return io::design_spec_from_json(io::read_json_file(opts.spec_path)); });
        const DesignReport report = in_stage("design", [&] { return verify_design(design(spec), spec); });
        const std::string text = io::to_json(report).dump(2) + "\n";
        out << text;
        if (!opts.out_dir.empty()) {
            in_stage("design", [&] {
                const fs::path dir = prepare_dir(opts.out_dir);
                write_file(dir / "design_report.json", text);
                const auto c = report.polynomial.coeffs();
                write_file(dir / "coefficients.json",
                           json{{"coefficients", std::vector<double>(c.begin(), c.end())}}.dump(2) + "\n");
                return 0;
            });
        }
        return report.verdict ? kOk : kNumerical;
    } catch (const StageError& e) {
        return report_error(out, e, false);
    }
}

int run_simulate(const SimulateOptions& opts, std::ostream& out) {
    try {
        const Polynomial poly = in_stage("simulate", [&] { return io::coefficients_from_json(io::read_json_file(opts.coeffs_path)); });
        const InputSpec input = in_stage("simulate", [&] {
            return opts.input_path.empty() ? default_input() : io::input_spec_from_json(io::read_json_file(opts.input_path));
        });
        const Signal y = in_stage("simulate", [&] { return simulate_poly(poly, input, opts.t_end, opts.dt); });
        const std::string text = in_stage("simulate", [&] { return signal_text(y, opts.format); });
        if (opts.out_dir.empty()) {
            out << text;
        } else {
            in_stage("simulate", [&] {
                write_file(prepare_dir(opts.out_dir) / (opts.format == "json" ? "signal.json" : "signal.csv"), text);
                return 0;
            });
        }
        return kOk;
    } catch (const StageError& e) {
        return report_error(out, e, false);
    }
}

int run_analyze(const AnalyzeOptions& opts, std::ostream& out) {
    try {
        const Signal s = in_stage("analyze", [&] { return load_signal(opts.signal_path); });
        const Analysis a = in_stage("analyze", [&] { return analyze_signal(s, opts.window, opts.hop, opts.discard); });
        out << analysis_json(a).dump(2) << '\n';
        if (!opts.out_dir.empty()) {
            in_stage("analyze", [&] {
                write_analysis_files(prepare_dir(opts.out_dir), a);
                return 0;
            });
        }
        return kOk;
    } catch (const StageError& e) {
        return report_error(out, e, false);
    }
}

int run_pipeline(const PipelineOptions& opts, std::ostream& out) {
    std::vector<std::future<ScenarioOutcome>> jobs;
    for (const std::string& path : opts.config_paths) {
        jobs.push_back(std::async(std::launch::async, run_scenario, path, opts.out_dir));
    }
    json scenarios = json::array();
    int code = kOk;
    for (auto& job : jobs) {
        ScenarioOutcome o = job.get();
        scenarios.push_back(std::move(o.summary));
        code = std::max(code, o.exit_code);
    }
    out << json{{"status", code == kOk ? "PASS" : "FAIL"}, {"scenarios", scenarios}}.dump(2) << '\n';
    return code;
}

}  // namespace harmosc::cli
