#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emw/solver.hpp"

namespace emw {

struct ArrivalCurve {
  std::vector<double> xi;
  std::vector<std::optional<double>> arrival_t;
  double threshold_frac = 0.05;
  double reference = 0.0;  // max_t |chi(0, t)|

  std::size_t detected() const;
};

/// Arrival at a point is the first time |chi| reaches threshold_frac times the
/// source peak, interpolated linearly between snapshots. A zero source peak
/// yields a curve with no arrivals. DomainError unless 0 < threshold_frac < 1.
ArrivalCurve detect_arrival_times(const WaveField& w, double threshold_frac = 0.05);

struct VelocityEstimate {
  double velocity = 0.0;  // miles/s
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of xi against arrival time over the detected points
/// with xi in [xi_lo, xi_hi]. DomainError with fewer than 3 points.
VelocityEstimate estimate_velocity(const ArrivalCurve& curve, double xi_lo = -1e300, double xi_hi = 1e300);

/// One estimate per grid segment, using the points strictly inside it.
/// Segments with fewer than 3 detected points get nullopt.
std::vector<std::optional<VelocityEstimate>> segment_velocities(const ArrivalCurve& curve, const ContinuumGrid& grid);

/// max_t |chi(xi, t)| per grid point.
std::vector<double> amplitude_profile(const WaveField& w);

/// Mean of the amplitude profile over the points of each segment.
std::vector<double> segment_mean_peaks(const std::vector<double>& profile, const ContinuumGrid& grid);

struct ModelDivergence {
  std::vector<double> times;
  std::vector<double> max_chi, l2_chi, max_theta, l2_theta;
  double summary = 0.0;  // max over time of l2_chi
};

/// Differences at each snapshot time of `a` inside the time span of `b`; `b` is
/// interpolated linearly in time. DomainError when the grids differ.
ModelDivergence compare_models(const WaveField& a, const WaveField& b);

std::string arrival_json(const ArrivalCurve& curve);
std::string analysis_json(const ArrivalCurve& curve, const std::vector<std::optional<VelocityEstimate>>& seg_v,
                          const std::optional<VelocityEstimate>& overall, const std::vector<double>& profile,
                          const ContinuumGrid& grid);
std::string divergence_json(const ModelDivergence& d);
/// Aligned-text summary per segment.
std::string analysis_text(const ContinuumGrid& grid, const std::vector<std::optional<VelocityEstimate>>& seg_v,
                          const std::vector<double>& seg_peaks);

}  // namespace emw
