#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "emw/case_io.hpp"
#include "emw/error.hpp"

namespace emw {

using json = nlohmann::ordered_json;

namespace {

ParseError make_parse_error(std::string_view text, const json::parse_error& e) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return ParseError("JSON syntax error at line " + std::to_string(line) + ", column " +
                        std::to_string(col),
                    line, col);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw make_parse_error(text, e);
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + "." + key, "missing required field");
  return *it;
}

double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number()) throw SchemaError(where + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  return number(obj, key, where);
}

int integer(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number_integer()) throw SchemaError(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw SchemaError(where + "." + key, "expected a string");
  return v.get<std::string>();
}

const json& array_field(const json& obj, const char* key) {
  const auto& v = require(obj, key, "case");
  if (!v.is_array()) throw SchemaError(std::string("case.") + key, "expected an array");
  return v;
}

BusKind parse_kind(const std::string& s, const std::string& where) {
  if (s == "slack") return BusKind::slack;
  if (s == "pv") return BusKind::pv;
  if (s == "pq") return BusKind::pq;
  throw SchemaError(where, "expected one of slack|pv|pq, got \"" + s + "\"");
}

LineStatus parse_status(const std::string& s, const std::string& where) {
  if (s == "in_service") return LineStatus::in_service;
  if (s == "out") return LineStatus::out;
  throw SchemaError(where, "expected in_service|out, got \"" + s + "\"");
}

}  // namespace

PowerCase parse_case_json(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw SchemaError("case", "top level must be an object");

  PowerCase c;
  c.base_mva = number(doc, "base_mva", "case");
  c.frequency_hz = number(doc, "frequency_hz", "case");

  const auto& buses = array_field(doc, "buses");
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const std::string w = "buses[" + std::to_string(i) + "]";
    const auto& b = buses[i];
    Bus bus;
    bus.id = integer(b, "id", w);
    bus.kind = parse_kind(string_field(b, "kind", w), w + ".kind");
    bus.v_set = number_or(b, "v_set", w, 1.0);
    bus.p_load = number_or(b, "p_load", w, 0.0);
    bus.q_load = number_or(b, "q_load", w, 0.0);
    c.buses.push_back(bus);
  }

  std::set<int> ids;
  for (const auto& b : c.buses) ids.insert(b.id);
  auto check_ref = [&](int id, const std::string& where) {
    if (!ids.count(id)) {
      throw ReferenceError(where + " references unknown bus " + std::to_string(id));
    }
  };

  const auto& lines = array_field(doc, "lines");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string w = "lines[" + std::to_string(i) + "]";
    const auto& l = lines[i];
    Line line;
    line.from_bus = integer(l, "from_bus", w);
    line.to_bus = integer(l, "to_bus", w);
    line.r = number_or(l, "r", w, 0.0);
    line.x = number(l, "x", w);
    line.b_shunt = number_or(l, "b_shunt", w, 0.0);
    line.length_miles = number(l, "length_miles", w);
    if (l.contains("status")) line.status = parse_status(string_field(l, "status", w), w + ".status");
    check_ref(line.from_bus, w);
    check_ref(line.to_bus, w);
    c.lines.push_back(line);
  }

  const auto& gens = array_field(doc, "generators");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string w = "generators[" + std::to_string(i) + "]";
    const auto& g = gens[i];
    Generator gen;
    gen.bus = integer(g, "bus", w);
    gen.h_const = number(g, "h_const", w);
    gen.mva_rating = number(g, "mva_rating", w);
    gen.p_gen = number_or(g, "p_gen", w, 0.0);
    check_ref(gen.bus, w);
    c.generators.push_back(gen);
  }

  finalize_derived(c);
  return c;
}

std::string serialize_case_json(const PowerCase& c) {
  json doc;
  doc["base_mva"] = c.base_mva;
  doc["frequency_hz"] = c.frequency_hz;
  doc["buses"] = json::array();
  for (const auto& b : c.buses) {
    doc["buses"].push_back({{"id", b.id},
                            {"kind", to_string(b.kind)},
                            {"v_set", b.v_set},
                            {"p_load", b.p_load},
                            {"q_load", b.q_load}});
  }
  doc["lines"] = json::array();
  for (const auto& l : c.lines) {
    doc["lines"].push_back({{"from_bus", l.from_bus},
                            {"to_bus", l.to_bus},
                            {"r", l.r},
                            {"x", l.x},
                            {"b_shunt", l.b_shunt},
                            {"length_miles", l.length_miles},
                            {"status", l.in_service() ? "in_service" : "out"}});
  }
  doc["generators"] = json::array();
  for (const auto& g : c.generators) {
    doc["generators"].push_back({{"bus", g.bus},
                                 {"h_const", g.h_const},
                                 {"mva_rating", g.mva_rating},
                                 {"p_gen", g.p_gen}});
  }
  return doc.dump(2) + "\n";
}

MatpowerSidecar parse_sidecar_json(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw SchemaError("sidecar", "top level must be an object");
  MatpowerSidecar s;
  s.frequency_hz = number_or(doc, "frequency_hz", "sidecar", s.frequency_hz);
  s.default_h_const = number_or(doc, "default_h_const", "sidecar", s.default_h_const);
  s.default_length_per_x = number_or(doc, "default_length_per_x", "sidecar", s.default_length_per_x);
  if (doc.contains("lengths")) {
    const auto& m = doc["lengths"];
    if (!m.is_object()) throw SchemaError("sidecar.lengths", "expected an object");
    for (const auto& [k, v] : m.items()) {
      if (!v.is_number()) throw SchemaError("sidecar.lengths." + k, "expected a number");
      s.lengths.emplace_back(k, v.get<double>());
    }
  }
  if (doc.contains("generators")) {
    const auto& m = doc["generators"];
    if (!m.is_object()) throw SchemaError("sidecar.generators", "expected an object");
    for (const auto& [k, v] : m.items()) {
      const std::string w = "sidecar.generators." + k;
      int bus = 0;
      try {
        std::size_t used = 0;
        bus = std::stoi(k, &used);
        if (used != k.size()) throw std::invalid_argument(k);
      } catch (const std::exception&) {
        throw SchemaError(w, "key must be a bus id");
      }
      MatpowerSidecar::GenData g;
      g.h_const = number(v, "h_const", w);
      g.mva_rating = number_or(v, "mva_rating", w, 0.0);
      s.generators.emplace_back(bus, g);
    }
  }
  return s;
}

Scenario parse_scenario_json(std::string_view text) {
  const json doc = parse_json(text);
  const auto& d = require(doc, "disturbance", "scenario");
  const std::string w = "scenario.disturbance";
  Scenario s;
  const auto kind = string_field(d, "kind", w);
  if (kind == "load_step") {
    s.disturbance.kind = DisturbanceKind::load_step;
    s.disturbance.target_bus = integer(d, "target", w);
  } else if (kind == "line_outage") {
    s.disturbance.kind = DisturbanceKind::line_outage;
    s.disturbance.target_line = string_field(d, "target", w);
  } else {
    throw SchemaError(w + ".kind", "expected load_step|line_outage, got \"" + kind + "\"");
  }
  s.disturbance.magnitude_fraction = number_or(d, "magnitude_fraction", w, 0.0);
  s.disturbance.t_start = number_or(d, "t_start", w, 0.0);
  if (d.contains("duration") && !d["duration"].is_null()) {
    s.disturbance.duration = number(d, "duration", w);
  }
  if (d.contains("p_only")) {
    if (!d["p_only"].is_boolean()) throw SchemaError(w + ".p_only", "expected a boolean");
    s.disturbance.p_only = d["p_only"].get<bool>();
  }
  if (doc.contains("src")) s.src = integer(doc, "src", "scenario");
  if (doc.contains("dst")) s.dst = integer(doc, "dst", "scenario");
  check_disturbance(s.disturbance);
  return s;
}

std::string serialize_scenario_json(const Scenario& s) {
  json d;
  const auto& dist = s.disturbance;
  d["kind"] = to_string(dist.kind);
  if (dist.kind == DisturbanceKind::load_step) {
    d["target"] = dist.target_bus;
  } else {
    d["target"] = dist.target_line;
  }
  d["magnitude_fraction"] = dist.magnitude_fraction;
  d["t_start"] = dist.t_start;
  d["duration"] = std::isfinite(dist.duration) ? json(dist.duration) : json(nullptr);
  d["p_only"] = dist.p_only;
  json doc;
  doc["disturbance"] = d;
  if (s.src) doc["src"] = *s.src;
  if (s.dst) doc["dst"] = *s.dst;
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PowerCase load_case_file(const std::string& path, const std::string& sidecar_path) {
  const auto text = read_text_file(path);
  if (path.size() >= 2 && path.compare(path.size() - 2, 2, ".m") == 0) {
    MatpowerSidecar side;
    if (!sidecar_path.empty()) side = parse_sidecar_json(read_text_file(sidecar_path));
    return parse_matpower(text, side);
  }
  return parse_case_json(text);
}

}  // namespace emw
