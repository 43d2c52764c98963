#pragma once

#include <string>
#include <vector>

#include "emw/case_model.hpp"
#include "emw/inertia.hpp"
#include "emw/powerflow.hpp"

namespace emw {

struct EmwPath {
  std::vector<int> buses;
  std::vector<std::size_t> lines;   // indices into PowerCase::lines
  std::vector<double> velocities;   // miles/s per line
  std::vector<double> lengths;      // miles per line
  double travel_time_s = 0.0;
  double length_miles = 0.0;
};

/// sqrt(V^2 b / (j_h w0)) with b = length / x (per-unit susceptance times miles).
/// Throws DomainError for non-positive j_h, x or length.
double line_emw_velocity(const Line& line, double j_h, double v_pu, double omega0);

/// Minimum travel-time path by Dijkstra. Edge weight is length / velocity with
/// V the mean of the end-bus magnitudes; lines with no inertia are impassable.
/// Ties go to the smaller bus id. Throws ReferenceError for unknown buses and
/// DomainError when dst is unreachable.
EmwPath shortest_emw_path(const PowerCase& c, const InertiaMap& map, const PowerFlowSolution& sol,
                          int src, int dst);

double path_travel_time(const EmwPath& p);

/// {"buses": [...], "lines": [...], "velocities": [...], "travel_time_s": t}
std::string path_json(const PowerCase& c, const EmwPath& p);

}  // namespace emw
