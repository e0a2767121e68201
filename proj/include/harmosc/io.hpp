#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "harmosc/analysis.hpp"
#include "harmosc/designer.hpp"
#include "harmosc/lti.hpp"

namespace harmosc::io {

using nlohmann::json;

// 17 significant digits.
std::string format_double(double v);

// {"order": 4, "omega_k": 2, "decays": [5, 10], "pinned": {"0": 1}}
DesignSpec design_spec_from_json(const json& j);
json to_json(const DesignSpec& spec);

// {"type": "impulses", "events": [{"t": 0, "area": 1}]}
// {"type": "steps", "steps": [{"t": 0, "level": 0.5}, ...]}
// {"type": "zero"}
InputSpec input_spec_from_json(const json& j);
json to_json(const InputSpec& spec);

// Accepts {"coefficients": [...]} (a design report qualifies) or a bare array.
Polynomial coefficients_from_json(const json& j);

json to_json(const DesignReport& report);
json to_json(const OscillationReport& report);
json error_json(const std::string& code, const std::string& message, const std::string& stage = {});

// "t,y" header, one row per sample.
void write_signal_csv(std::ostream& os, const Signal& signal);
// Requires a uniform time column.
Signal read_signal_csv(std::istream& is);

// First row: frequency bins; first column: frame times.
void write_spectrogram_csv(std::ostream& os, const Spectrogram& spec);
// "t,real,imag"
void write_analytic_csv(std::ostream& os, const AnalyticSignal& z);

json read_json_file(const std::string& path);

}  // namespace harmosc::io
