#pragma once

#include <string>
#include <vector>

#include "emw/case_model.hpp"

namespace emw {

struct InertiaOptions {
  double tol = 1e-6;     // stop when in-flight inertia < tol * generator inertia
  int max_rounds = 100;  // Step-2 rounds per generator wavefront
  bool parallel = true;  // run generator wavefronts with OpenMP
};

/// Inertia carried by each line, indexed like PowerCase::lines.
/// Out-of-service lines carry zero.
struct InertiaMap {
  std::vector<double> j_total;     // per-unit s^2
  std::vector<double> j_per_mile;  // per-unit s^2 / mile
  int max_rounds_used = 0;
  double folded_residue = 0.0;     // in-flight inertia deposited in place at termination
};

/// Admittance-based inertia distribution.
///
/// Step 1 splits each generator bus's inertia over its incident lines in
/// proportion to |1/(r + jx)|. Step 2 runs at every non-generator bus a
/// packet arrives at: with n onward lines (all other in-service lines at that
/// bus), the arriving line keeps n*Y_i / (n*Y_i + sum Y_j) of the packet and
/// the rest moves on, split over the onward lines in proportion to Y_j.
/// Packets stop at generator buses and at dead ends. Wavefronts terminate when
/// the in-flight amount falls below tol, or after max_rounds; whatever is still
/// in flight is deposited on the line carrying it, so the total is conserved.
///
/// Throws DomainError when a connected component with lines has no generator,
/// or a generator bus has no in-service line.
InertiaMap distribute_inertia(const PowerCase& c, const InertiaOptions& opt = {});

/// j_total / length_miles for the given line index.
double line_density(const InertiaMap& map, std::size_t line);

/// Fraction of an arriving packet kept by the arriving line.
double retained_fraction(double y_in, double sum_onward, std::size_t n_onward);

/// CSV with header line_id,j_total,j_per_mile.
std::string inertia_csv(const PowerCase& c, const InertiaMap& map);

}  // namespace emw
