#include "emw/case_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "emw/error.hpp"

namespace emw {

double generator_inertia(double h_const, double mva_rating, double base_mva, double omega0) {
  return 2.0 * h_const * mva_rating / (base_mva * omega0 * omega0);
}

void finalize_derived(PowerCase& c) {
  c.omega0 = 2.0 * std::numbers::pi * c.frequency_hz;
  for (auto& g : c.generators) {
    g.inertia_j = generator_inertia(g.h_const, g.mva_rating, c.base_mva, c.omega0);
  }
}

std::optional<std::size_t> PowerCase::find_bus(int id) const {
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t PowerCase::bus_index(int id) const {
  if (auto i = find_bus(id)) return *i;
  throw ReferenceError("unknown bus " + std::to_string(id));
}

bool PowerCase::has_generator(int bus_id) const {
  return std::any_of(generators.begin(), generators.end(),
                     [&](const Generator& g) { return g.bus == bus_id; });
}

namespace {

// k-th (1-based) occurrence of the unordered pair {a, b} among lines before `upto`.
int parallel_ordinal(const std::vector<Line>& lines, std::size_t upto) {
  const auto& l = lines[upto];
  int k = 1;
  for (std::size_t i = 0; i < upto; ++i) {
    const auto& o = lines[i];
    if ((o.from_bus == l.from_bus && o.to_bus == l.to_bus) ||
        (o.from_bus == l.to_bus && o.to_bus == l.from_bus)) {
      ++k;
    }
  }
  return k;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

std::string PowerCase::line_label(std::size_t line) const {
  const auto& l = lines.at(line);
  std::string s = std::to_string(l.from_bus) + "-" + std::to_string(l.to_bus);
  if (int k = parallel_ordinal(lines, line); k > 1) s += "#" + std::to_string(k);
  return s;
}

std::optional<std::size_t> PowerCase::find_line(std::string_view ref) const {
  if (!ref.empty() && ref.front() == '#') {
    int idx = 0;
    if (parse_int(ref.substr(1), idx) && idx >= 0 && static_cast<std::size_t>(idx) < lines.size()) {
      return static_cast<std::size_t>(idx);
    }
    return std::nullopt;
  }
  int ordinal = 1;
  if (auto hash = ref.find('#'); hash != std::string_view::npos) {
    if (!parse_int(ref.substr(hash + 1), ordinal) || ordinal < 1) return std::nullopt;
    ref = ref.substr(0, hash);
  }
  auto dash = ref.find('-', 1);
  if (dash == std::string_view::npos) return std::nullopt;
  int a = 0, b = 0;
  if (!parse_int(ref.substr(0, dash), a) || !parse_int(ref.substr(dash + 1), b)) return std::nullopt;
  int seen = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if ((l.from_bus == a && l.to_bus == b) || (l.from_bus == b && l.to_bus == a)) {
      if (++seen == ordinal) return i;
    }
  }
  return std::nullopt;
}

std::size_t PowerCase::line_index(std::string_view ref) const {
  if (auto i = find_line(ref)) return *i;
  throw ReferenceError("unknown line " + std::string(ref));
}

ValidationReport validate_case(const PowerCase& c) {
  ValidationReport rep;
  auto add = [&](std::string code, std::string msg) {
    rep.violations.push_back({std::move(code), std::move(msg)});
  };

  if (!(c.base_mva > 0)) add("base_mva", "base_mva must be positive");
  if (!(c.frequency_hz > 0)) add("frequency_hz", "frequency_hz must be positive");
  if (c.omega0 != 2.0 * std::numbers::pi * c.frequency_hz) {
    add("omega0", "omega0 is not 2*pi*frequency_hz");
  }

  std::set<int> ids;
  int slack = 0;
  for (const auto& b : c.buses) {
    if (!ids.insert(b.id).second) add("duplicate bus", "bus id " + std::to_string(b.id) + " is not unique");
    if (b.kind == BusKind::slack) ++slack;
    if (b.kind != BusKind::pq && !(b.v_set > 0)) {
      add("v_set", "bus " + std::to_string(b.id) + " needs v_set > 0");
    }
  }
  if (slack == 0) add("no slack", "case has no slack bus");
  if (slack > 1) add("multiple slack", "case has " + std::to_string(slack) + " slack buses");

  for (std::size_t i = 0; i < c.lines.size(); ++i) {
    const auto& l = c.lines[i];
    const std::string name = "line " + c.line_label(i);
    if (!ids.count(l.from_bus)) add("dangling bus", name + " references unknown bus " + std::to_string(l.from_bus));
    if (!ids.count(l.to_bus)) add("dangling bus", name + " references unknown bus " + std::to_string(l.to_bus));
    if (l.from_bus == l.to_bus) add("self loop", name + " connects a bus to itself");
    if (!(l.x > 0)) add("x", name + " needs x > 0");
    if (!(l.r >= 0)) add("r", name + " needs r >= 0");
    if (!(l.b_shunt >= 0)) add("b_shunt", name + " needs b_shunt >= 0");
    if (!(l.length_miles > 0)) add("length_miles", name + " needs length_miles > 0");
  }

  for (std::size_t i = 0; i < c.generators.size(); ++i) {
    const auto& g = c.generators[i];
    const std::string name = "generator " + std::to_string(i) + " at bus " + std::to_string(g.bus);
    if (!ids.count(g.bus)) add("dangling bus", name + " references unknown bus");
    if (!(g.h_const > 0)) add("h_const", name + " needs h_const > 0");
    if (!(g.mva_rating > 0)) add("mva_rating", name + " needs mva_rating > 0");
    const double j = generator_inertia(g.h_const, g.mva_rating, c.base_mva, c.omega0);
    if (g.inertia_j != j) add("inertia_j", name + " has a stale inertia_j");
  }
  return rep;
}

Phase Disturbance::phase_at(double t) const noexcept {
  if (t < t_start) return Phase::pre;
  if (kind == DisturbanceKind::load_step) return Phase::during;
  return t < t_end() ? Phase::during : Phase::post;
}

void check_disturbance(const Disturbance& d) {
  if (!(d.t_start >= 0)) throw DomainError("disturbance t_start must be >= 0");
  if (std::isfinite(d.duration) && !(d.duration > 0)) throw DomainError("disturbance duration must be > 0");
  if (std::isnan(d.duration)) throw DomainError("disturbance duration must be > 0");
  if (d.kind == DisturbanceKind::load_step && !(d.magnitude_fraction > -1.0)) {
    throw DomainError("load step magnitude_fraction must be > -1");
  }
}

PowerCase apply_disturbance(const PowerCase& c, const Disturbance& d, Phase phase) {
  PowerCase out = c;
  if (d.kind == DisturbanceKind::load_step) {
    const auto bi = c.bus_index(d.target_bus);
    if (phase == Phase::pre) return out;
    auto& b = out.buses[bi];
    const double scale = 1.0 + d.magnitude_fraction;
    b.p_load *= scale;
    if (!d.p_only) b.q_load *= scale;
  } else {
    const auto li = c.line_index(d.target_line);
    if (phase == Phase::during) out.lines[li].status = LineStatus::out;
  }
  return out;
}

std::string to_string(BusKind k) {
  switch (k) {
    case BusKind::slack: return "slack";
    case BusKind::pv: return "pv";
    case BusKind::pq: return "pq";
  }
  return "?";
}

std::string to_string(DisturbanceKind k) {
  return k == DisturbanceKind::load_step ? "load_step" : "line_outage";
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::pre: return "pre";
    case Phase::during: return "during";
    case Phase::post: return "post";
  }
  return "?";
}

}  // namespace emw
