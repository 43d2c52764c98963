#include "emw/continuum.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "emw/error.hpp"

namespace emw {

bool ContinuumGrid::is_junction(std::size_t i) const {
  return i > 0 && i + 1 < n_points && bus_markers.count(i) > 0;
}

std::size_t ContinuumGrid::segment_of(std::size_t i) const {
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (i >= segments[s].begin && (i < segments[s].end || s + 1 == segments.size())) return s;
  }
  throw ReferenceError("grid index " + std::to_string(i) + " is outside the grid");
}

ContinuumGrid build_grid(const std::vector<SegmentSpec>& specs, double dxi, double omega0) {
  if (specs.empty()) throw DomainError("a grid needs at least one segment");
  if (!(dxi > 0)) throw DomainError("dxi must be positive");
  if (!(omega0 > 0)) throw DomainError("omega0 must be positive");
  ContinuumGrid grid;
  grid.dxi = dxi;
  grid.omega0 = omega0;
  std::size_t begin = 0;
  for (const auto& s : specs) {
    if (s.length_miles < 2 * dxi) {
      throw DomainError("dxi " + std::to_string(dxi) + " exceeds half of the " +
                        std::to_string(s.length_miles) + "-mile segment " + std::to_string(s.from_bus) +
                        "-" + std::to_string(s.to_bus));
    }
    if (!(s.b > 0) || !(s.j_h > 0) || s.g < 0) {
      throw DomainError("segment " + std::to_string(s.from_bus) + "-" + std::to_string(s.to_bus) +
                        " needs b > 0, j_h > 0 and g >= 0");
    }
    Segment seg;
    seg.begin = begin;
    seg.end = begin + static_cast<std::size_t>(std::lround(s.length_miles / dxi));
    seg.from_bus = s.from_bus;
    seg.to_bus = s.to_bus;
    seg.line = s.line;
    seg.b = s.b;
    seg.g = s.g;
    seg.j_h = s.j_h;
    seg.nu = std::sqrt(s.b / (s.j_h * omega0));
    grid.segments.push_back(seg);
    grid.bus_markers[seg.begin] = seg.from_bus;
    grid.bus_markers[seg.end] = seg.to_bus;
    begin = seg.end;
  }
  grid.n_points = begin + 1;
  grid.xi.resize(grid.n_points);
  grid.b.resize(grid.n_points);
  grid.g.resize(grid.n_points);
  grid.j_h.resize(grid.n_points);
  grid.nu.resize(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    grid.xi[i] = static_cast<double>(i) * dxi;
    const auto& seg = grid.segments[grid.segment_of(i)];
    grid.b[i] = seg.b;
    grid.g[i] = seg.g;
    grid.j_h[i] = seg.j_h;
    grid.nu[i] = seg.nu;
  }
  return grid;
}

ContinuumGrid discretize_path(const EmwPath& p, const PowerCase& c, const InertiaMap& map, double dxi) {
  if (p.lines.empty()) throw DomainError("cannot discretize a path without lines");
  std::vector<SegmentSpec> specs;
  for (std::size_t k = 0; k < p.lines.size(); ++k) {
    const auto& l = c.lines[p.lines[k]];
    SegmentSpec s;
    s.length_miles = l.length_miles;
    s.b = l.length_miles / l.x;
    s.g = l.length_miles * l.r / (l.r * l.r + l.x * l.x);
    s.j_h = map.j_per_mile[p.lines[k]];
    s.from_bus = p.buses[k];
    s.to_bus = p.buses[k + 1];
    s.line = static_cast<std::ptrdiff_t>(p.lines[k]);
    specs.push_back(s);
  }
  return build_grid(specs, dxi, c.omega0);
}

ContinuumGrid uniform_grid(double length_miles, double dxi, double b, double j_h, double omega0) {
  SegmentSpec s;
  s.length_miles = length_miles;
  s.b = b;
  s.j_h = j_h;
  s.from_bus = 1;
  s.to_bus = 2;
  return build_grid({s}, dxi, omega0);
}

FieldState zero_state(const ContinuumGrid& grid, double v_const) {
  FieldState s;
  const auto n = grid.n_points;
  s.delta_theta.assign(n, 0.0);
  s.chi.assign(n, 0.0);
  s.lam.assign(n, 0.0);
  s.gamma.assign(n, 0.0);
  s.lam_left.assign(n, 0.0);
  s.v.assign(n, v_const);
  return s;
}

namespace {

void check_interior(const ContinuumGrid& grid, const std::vector<double>& v, const std::vector<double>& theta,
                    std::size_t i) {
  if (v.size() != grid.n_points || theta.size() != grid.n_points) {
    throw DomainError("field length does not match the grid");
  }
  if (i == 0 || i + 1 >= grid.n_points) {
    throw ReferenceError("power deviation needs an interior index, got " + std::to_string(i));
  }
}

PowerDeviation deviation(double b, double g, const ContinuumGrid& grid, const std::vector<double>& v,
                         const std::vector<double>& theta, std::size_t i) {
  const double h = grid.dxi;
  const double vv = v[i];
  const double v_x = (v[i + 1] - v[i - 1]) / (2 * h);
  const double v_xx = (v[i + 1] - 2 * v[i] + v[i - 1]) / (h * h);
  const double t_x = (theta[i + 1] - theta[i - 1]) / (2 * h);
  const double t_xx = (theta[i + 1] - 2 * theta[i] + theta[i - 1]) / (h * h);
  const double a = vv * v_xx - vv * vv * t_x * t_x;
  const double d = vv * vv * t_xx + 2 * vv * v_x * t_x;
  return {-g * a - b * d, g * d - b * a};
}

}  // namespace

PowerDeviation power_deviation_lossless(const ContinuumGrid& grid, const std::vector<double>& v,
                                        const std::vector<double>& theta, std::size_t i) {
  check_interior(grid, v, theta, i);
  return deviation(grid.b[i], 0.0, grid, v, theta, i);
}

PowerDeviation power_deviation_lossy(const ContinuumGrid& grid, const std::vector<double>& v,
                                     const std::vector<double>& theta, std::size_t i) {
  check_interior(grid, v, theta, i);
  return deviation(grid.b[i], grid.g[i], grid, v, theta, i);
}

std::vector<double> solve_voltage_profile(const ContinuumGrid& grid, double v_left, double v_right,
                                          const std::map<std::size_t, double>& fixed) {
  const std::size_t n = grid.n_points;
  if (!(v_left > 0) || !(v_right > 0)) throw DomainError("boundary voltages must be positive");
  std::vector<double> v(n, 0.0);
  // Rows: fixed nodes are identity rows, free nodes are -v[i-1] + 2 v[i] - v[i+1] = 0.
  std::vector<char> is_fixed(n, 0);
  is_fixed[0] = is_fixed[n - 1] = 1;
  v[0] = v_left;
  v[n - 1] = v_right;
  for (const auto& [i, val] : fixed) {
    if (i >= n) throw ReferenceError("fixed voltage index " + std::to_string(i) + " is outside the grid");
    if (!(val > 0)) throw DomainError("fixed voltages must be positive");
    if (i == 0 || i == n - 1) continue;
    is_fixed[i] = 1;
    v[i] = val;
  }
  std::vector<double> cp(n, 0.0), dp(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0.0, b = 1.0, c = 0.0, d = v[i];
    if (!is_fixed[i]) {
      a = -1.0;
      b = 2.0;
      c = -1.0;
      d = 0.0;
    }
    const double denom = i == 0 ? b : b - a * cp[i - 1];
    cp[i] = c / denom;
    dp[i] = i == 0 ? d / denom : (d - a * dp[i - 1]) / denom;
  }
  v[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) v[i] = dp[i] - cp[i] * v[i + 1];
  return v;
}

std::vector<double> voltage_from_buses(const ContinuumGrid& grid, const std::vector<double>& marker_v) {
  if (marker_v.size() != grid.bus_markers.size()) {
    throw DomainError("need one voltage per bus marker");
  }
  std::map<std::size_t, double> fixed;
  std::size_t k = 0;
  for (const auto& [i, id] : grid.bus_markers) fixed[i] = marker_v[k++];
  return solve_voltage_profile(grid, marker_v.front(), marker_v.back(), fixed);
}

FieldState initial_conditions(const ContinuumGrid& grid, const PowerFlowSolution& sol, const Disturbance&) {
  std::vector<double> mv;
  for (const auto& [i, id] : grid.bus_markers) mv.push_back(sol.v_mag[sol.bus_index(id)]);
  FieldState s = zero_state(grid);
  s.v = voltage_from_buses(grid, mv);
  return s;
}

std::string grid_csv(const ContinuumGrid& grid) {
  std::ostringstream os;
  os << "index,xi_miles,b,g,j_h,nu,bus_id\n";
  char buf[256];
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.10e,%.10e,%.10e,%.10e,", i, grid.xi[i], grid.b[i], grid.g[i],
                  grid.j_h[i], grid.nu[i]);
    os << buf;
    if (auto it = grid.bus_markers.find(i); it != grid.bus_markers.end()) os << it->second;
    os << "\n";
  }
  return os.str();
}

}  // namespace emw
