#pragma once

#include <string>
#include <string_view>

#include "emw/case_model.hpp"

namespace emw {

/// Native JSON case: {base_mva, frequency_hz, buses[], lines[], generators[]}.
/// Syntax errors raise ParseError (with line/column), schema errors raise
/// SchemaError naming the field, dangling bus ids raise ReferenceError.
/// Semantic invariants (slack count, positive reactance, ...) are left to
/// validate_case so that invalid-but-parseable cases can be reported.
PowerCase parse_case_json(std::string_view text);
std::string serialize_case_json(const PowerCase& c);

/// Optional data that MATPOWER files do not carry.
struct MatpowerSidecar {
  double frequency_hz = 60.0;
  double default_h_const = 5.0;
  double default_length_per_x = 100.0;  // miles per per-unit reactance
  struct GenData {
    double h_const = 0.0;
    double mva_rating = 0.0;  // 0: use the gen matrix mBase column
  };
  std::vector<std::pair<int, GenData>> generators;       // by bus id
  std::vector<std::pair<std::string, double>> lengths;   // line id -> miles
};

/// Sidecar JSON: {"frequency_hz", "default_h_const", "lengths": {"6-7": 12.5},
/// "generators": {"39": {"h_const": 500, "mva_rating": 100}}}; all keys optional.
MatpowerSidecar parse_sidecar_json(std::string_view text);

/// MATPOWER case text (mpc.baseMVA, mpc.bus, mpc.gen, mpc.branch). Tap ratios,
/// phase shifts and ratings are ignored; nonzero bus shunts are rejected.
PowerCase parse_matpower(std::string_view text, const MatpowerSidecar& sidecar = {});

struct Scenario {
  Disturbance disturbance;
  std::optional<int> src;
  std::optional<int> dst;
};

/// {"disturbance": {kind, target, magnitude_fraction, t_start, duration, p_only},
///  "src": 39, "dst": 31}. A missing or null duration means "never ends".
Scenario parse_scenario_json(std::string_view text);
std::string serialize_scenario_json(const Scenario& s);

std::string read_text_file(const std::string& path);
/// Dispatches on extension: ".m" is MATPOWER, anything else native JSON.
PowerCase load_case_file(const std::string& path, const std::string& sidecar_path = {});

}  // namespace emw
