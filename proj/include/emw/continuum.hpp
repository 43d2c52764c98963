#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "emw/case_model.hpp"
#include "emw/graph_path.hpp"
#include "emw/inertia.hpp"
#include "emw/powerflow.hpp"

namespace emw {

/// One line of a discretized path. Points begin..end (inclusive) are global
/// grid indices; consecutive segments share their junction point.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  int from_bus = 0;
  int to_bus = 0;
  std::ptrdiff_t line = -1;  // index into PowerCase::lines, -1 for synthetic grids
  double b = 0.0;            // per-unit susceptance per mile, 1 / x_per_mile
  double g = 0.0;            // per-unit conductance per mile
  double j_h = 0.0;          // inertia per mile
  double nu = 0.0;           // sqrt(b / (j_h w0))

  std::size_t points() const noexcept { return end - begin + 1; }
};

struct SegmentSpec {
  double length_miles = 0.0;
  double b = 0.0;
  double g = 0.0;
  double j_h = 0.0;
  int from_bus = 0;
  int to_bus = 0;
  std::ptrdiff_t line = -1;
};

struct ContinuumGrid {
  std::size_t n_points = 0;
  double dxi = 0.0;
  double omega0 = 0.0;
  std::vector<double> xi;
  // Per point; a junction point carries the parameters of the segment it starts.
  std::vector<double> b, g, j_h, nu;
  std::vector<Segment> segments;
  std::map<std::size_t, int> bus_markers;  // path ends and junctions

  bool is_junction(std::size_t i) const;
  /// Segment owning point i (the outgoing one at junctions).
  std::size_t segment_of(std::size_t i) const;
};

/// Each segment gets round(length/dxi)+1 points. Throws DomainError when
/// dxi <= 0, dxi exceeds half of any segment length, or a parameter is not positive.
ContinuumGrid build_grid(const std::vector<SegmentSpec>& specs, double dxi, double omega0);

/// Throws DomainError for a path without lines or a dxi larger than half the shortest line.
ContinuumGrid discretize_path(const EmwPath& p, const PowerCase& c, const InertiaMap& map, double dxi);

/// Single uniform segment between synthetic buses 1 and 2.
ContinuumGrid uniform_grid(double length_miles, double dxi, double b, double j_h, double omega0);

struct FieldState {
  double time = 0.0;
  std::vector<double> delta_theta;
  std::vector<double> chi;
  std::vector<double> lam;       // outgoing side at junctions
  std::vector<double> gamma;     // v^2 * lam
  std::vector<double> lam_left;  // incoming side at junctions, equal to lam elsewhere
  std::vector<double> v;

  std::size_t size() const noexcept { return chi.size(); }
};

FieldState zero_state(const ContinuumGrid& grid, double v_const = 1.0);

struct PowerDeviation {
  double p = 0.0;
  double q = 0.0;
};

/// Centered second-order differences at interior index i; ReferenceError for
/// a boundary index.
PowerDeviation power_deviation_lossless(const ContinuumGrid& grid, const std::vector<double>& v,
                                        const std::vector<double>& theta, std::size_t i);
PowerDeviation power_deviation_lossy(const ContinuumGrid& grid, const std::vector<double>& v,
                                     const std::vector<double>& theta, std::size_t i);

/// Discrete Laplace solution with Dirichlet ends and any extra fixed interior
/// nodes (index -> value). Tridiagonal Thomas solve.
std::vector<double> solve_voltage_profile(const ContinuumGrid& grid, double v_left, double v_right,
                                          const std::map<std::size_t, double>& fixed = {});

/// Fixes every bus marker to its power-flow magnitude.
std::vector<double> voltage_from_buses(const ContinuumGrid& grid, const std::vector<double>& marker_v);

/// Equilibrium deviations with V from the power-flow magnitudes at the bus markers.
FieldState initial_conditions(const ContinuumGrid& grid, const PowerFlowSolution& sol, const Disturbance& d);

/// CSV: index,xi_miles,b,g,j_h,nu,bus_id
std::string grid_csv(const ContinuumGrid& grid);

}  // namespace emw
