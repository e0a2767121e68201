#include "harmosc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "harmosc/error.hpp"

namespace harmosc::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

double number(const json& j, const char* key) {
    if (!j.contains(key)) bad(std::string("missing key '") + key + "'");
    if (!j.at(key).is_number()) bad(std::string("key '") + key + "' must be a number");
    return j.at(key).get<double>();
}

int parse_index(const std::string& s) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad("pinned index '" + s + "' is not an integer");
    return value;
}

json null_or(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

DesignSpec design_spec_from_json(const json& j) {
    if (!j.is_object()) bad("design spec must be a JSON object");
    DesignSpec spec;
    if (!j.contains("order") || !j.at("order").is_number_integer()) bad("design spec needs an integer 'order'");
    spec.order = j.at("order").get<int>();
    spec.omega_k = number(j, "omega_k");
    if (j.contains("decays")) {
        if (!j.at("decays").is_array()) bad("'decays' must be an array");
        for (const auto& d : j.at("decays")) {
            if (!d.is_number()) bad("'decays' entries must be numbers");
            spec.decays.push_back(d.get<double>());
        }
    }
    if (j.contains("pinned")) {
        if (!j.at("pinned").is_object()) bad("'pinned' must be an object of index -> value");
        for (const auto& [key, value] : j.at("pinned").items()) {
            if (!value.is_number()) bad("pinned values must be numbers");
            spec.pinned[parse_index(key)] = value.get<double>();
        }
    }
    return spec;
}

json to_json(const DesignSpec& spec) {
    json pinned = json::object();
    for (const auto& [index, value] : spec.pinned) pinned[std::to_string(index)] = value;
    return {{"order", spec.order}, {"omega_k", spec.omega_k}, {"decays", spec.decays}, {"pinned", pinned}};
}

InputSpec input_spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        bad("input spec needs a string 'type'");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "zero") return ZeroInput{};
    if (type == "impulses") {
        if (!j.contains("events") || !j.at("events").is_array()) bad("impulse input needs an 'events' array");
        ImpulseTrain train;
        for (const auto& e : j.at("events")) train.impulses.push_back({number(e, "t"), number(e, "area")});
        return train;
    }
    if (type == "steps") {
        if (!j.contains("steps") || !j.at("steps").is_array()) bad("step input needs a 'steps' array");
        StepSchedule schedule;
        for (const auto& s : j.at("steps")) schedule.steps.push_back({number(s, "t"), number(s, "level")});
        return schedule;
    }
    bad("unknown input type '" + type + "'");
}

json to_json(const InputSpec& spec) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ImpulseTrain>) {
                json events = json::array();
                for (const auto& e : s.impulses) events.push_back({{"t", e.time}, {"area", e.area}});
                return {{"type", "impulses"}, {"events", events}};
            } else if constexpr (std::is_same_v<T, StepSchedule>) {
                json steps = json::array();
                for (const auto& st : s.steps) steps.push_back({{"t", st.start}, {"level", st.level}});
                return {{"type", "steps"}, {"steps", steps}};
            } else {
                return {{"type", "zero"}};
            }
        },
        spec);
}

Polynomial coefficients_from_json(const json& j) {
    const json& arr = j.is_object() && j.contains("coefficients") ? j.at("coefficients") : j;
    if (!arr.is_array()) bad("expected a 'coefficients' array");
    std::vector<double> c;
    for (const auto& v : arr) {
        if (!v.is_number()) bad("coefficients must be numbers");
        c.push_back(v.get<double>());
    }
    return Polynomial(std::move(c));
}

json to_json(const DesignReport& report) {
    json roots = json::array();
    for (std::size_t i = 0; i < report.roots.size(); ++i) {
        const Complex z = report.roots[i];
        const PolarRoot p = to_polar(z);
        roots.push_back({{"sigma", z.real()},
                         {"omega", z.imag()},
                         {"magnitude", p.magnitude},
                         {"theta", p.angle},
                         {"class", std::string(to_string(report.classes[i]))}});
    }
    const auto c = report.polynomial.coeffs();
    return {{"coefficients", std::vector<double>(c.begin(), c.end())},
            {"roots", roots},
            {"residuals",
             {{"oscillation", {{"real", report.oscillation_residual.real()}, {"imag", report.oscillation_residual.imag()}}},
              {"decay", report.decay_residuals}}},
            {"verdict", report.verdict}};
}

json to_json(const OscillationReport& report) {
    std::optional<double> tau;
    std::optional<double> transient_f;
    if (report.decay) {
        tau = report.decay->tau;
        transient_f = report.decay->transient_f_hz;
    }
    return {{"f_hz", report.steady.f_hz},
            {"omega_rad_s", report.steady.omega},
            {"amplitude", report.steady.amplitude},
            {"bias", report.steady.bias},
            {"tau_s", null_or(tau)},
            {"transient_f_hz", null_or(transient_f)},
            {"flags", report.flags}};
}

json error_json(const std::string& code, const std::string& message, const std::string& stage) {
    json j = {{"error", code}, {"message", message}};
    if (!stage.empty()) j["stage"] = stage;
    return j;
}

void write_signal_csv(std::ostream& os, const Signal& signal) {
    os << "t,y\n";
    for (std::size_t k = 0; k < signal.size(); ++k) {
        os << format_double(signal.time(k)) << ',' << format_double(signal.samples[k]) << '\n';
    }
}

Signal read_signal_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) bad("empty signal CSV");
    if (line.rfind("t,y", 0) != 0) bad("signal CSV must start with the header 't,y'");
    std::vector<double> times;
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) bad("malformed CSV row: " + line);
        try {
            times.push_back(std::stod(line.substr(0, comma)));
            values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            bad("malformed CSV row: " + line);
        }
    }
    if (times.size() < 2) bad("signal CSV needs at least two rows");
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(dt > 0.0)) bad("signal times must increase");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (std::abs(times[k] - (times.front() + static_cast<double>(k) * dt)) > 1e-6 * dt) {
            bad("signal CSV is not uniformly sampled");
        }
    }
    Signal s{times.front(), dt, std::move(values)};
    check_signal(s);
    return s;
}

void write_spectrogram_csv(std::ostream& os, const Spectrogram& spec) {
    os << "t\\f";
    for (double f : spec.frequencies) os << ',' << format_double(f);
    os << '\n';
    for (std::size_t i = 0; i < spec.frames(); ++i) {
        os << format_double(spec.times[i]);
        for (std::size_t k = 0; k < spec.bins(); ++k) os << ',' << format_double(spec.at(i, k));
        os << '\n';
    }
}

void write_analytic_csv(std::ostream& os, const AnalyticSignal& z) {
    os << "t,real,imag\n";
    for (std::size_t k = 0; k < z.samples.size(); ++k) {
        os << format_double(z.t0 + static_cast<double>(k) * z.dt) << ',' << format_double(z.samples[k].real()) << ','
           << format_double(z.samples[k].imag()) << '\n';
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        bad("invalid JSON in " + path + ": " + e.what());
    }
}

}  // namespace harmosc::io
