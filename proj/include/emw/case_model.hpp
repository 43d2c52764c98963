#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emw {

// Units: r, x, b_shunt and v_set are per-unit on base_mva; loads and
// generation are MW / MVAr (converted to per-unit inside the power flow);
// lengths are miles; time is seconds.

enum class BusKind { slack, pv, pq };
enum class LineStatus { in_service, out };

struct Bus {
  int id = 0;
  BusKind kind = BusKind::pq;
  double v_set = 1.0;
  double p_load = 0.0;
  double q_load = 0.0;

  bool operator==(const Bus&) const = default;
};

struct Line {
  int from_bus = 0;
  int to_bus = 0;
  double r = 0.0;
  double x = 0.0;
  double b_shunt = 0.0;
  double length_miles = 0.0;
  LineStatus status = LineStatus::in_service;

  bool in_service() const noexcept { return status == LineStatus::in_service; }
  int other_end(int bus) const noexcept { return bus == from_bus ? to_bus : from_bus; }
  bool operator==(const Line&) const = default;
};

struct Generator {
  int bus = 0;
  double h_const = 0.0;     // MJ/MVA on mva_rating
  double mva_rating = 0.0;  // MVA
  double p_gen = 0.0;       // MW
  double inertia_j = 0.0;   // per-unit s^2 on the system base, see generator_inertia()

  bool operator==(const Generator&) const = default;
};

/// Rotor inertia in per-unit on the system base: J = 2 H S / (S_base w0^2),
/// so that J w0 d2(theta)/dt2 reproduces the per-unit swing equation
/// (2H/w0) d2(delta)/dt2 = dP.
double generator_inertia(double h_const, double mva_rating, double base_mva, double omega0);

struct PowerCase {
  double base_mva = 100.0;
  double frequency_hz = 60.0;
  double omega0 = 0.0;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;

  std::optional<std::size_t> find_bus(int id) const;
  /// Throws ReferenceError naming the id.
  std::size_t bus_index(int id) const;
  bool has_generator(int bus_id) const;

  /// Canonical line id: "from-to", with "#k" appended for the k-th (k >= 2)
  /// parallel line between the same pair.
  std::string line_label(std::size_t line) const;
  /// Accepts "a-b", "b-a", "a-b#k" or a plain zero-based index "#12".
  std::optional<std::size_t> find_line(std::string_view ref) const;
  /// Throws ReferenceError naming the reference.
  std::size_t line_index(std::string_view ref) const;

  bool operator==(const PowerCase&) const = default;
};

/// Fills omega0 and each generator's inertia_j from the stored constants.
void finalize_derived(PowerCase& c);

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_case(const PowerCase& c);

enum class DisturbanceKind { load_step, line_outage };
enum class Phase { pre, during, post };

struct Disturbance {
  DisturbanceKind kind = DisturbanceKind::load_step;
  int target_bus = 0;        // load_step
  std::string target_line;   // line_outage, any form accepted by find_line
  double magnitude_fraction = 0.0;
  double t_start = 0.0;
  double duration = std::numeric_limits<double>::infinity();
  bool p_only = false;       // load_step: leave q_load untouched

  Phase phase_at(double t) const noexcept;
  double t_end() const noexcept { return t_start + duration; }
};

/// Throws DomainError if the disturbance fields break their invariants.
void check_disturbance(const Disturbance& d);

/// Returns a modified copy; throws ReferenceError for an unknown target.
PowerCase apply_disturbance(const PowerCase& c, const Disturbance& d, Phase phase);

std::string to_string(BusKind k);
std::string to_string(DisturbanceKind k);
std::string to_string(Phase p);

}  // namespace emw
