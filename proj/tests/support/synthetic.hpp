#pragma once

#include <cmath>
#include <functional>

#include "emw/continuum.hpp"
#include "emw/solver.hpp"

namespace emw::testing {

constexpr double kOmega0 = 376.99111843077515;

// Uniform line with nu = 1 mile/s and wave impedance b V / nu = 5 at V = 1.
inline ContinuumGrid unit_speed_line(double length, double dxi) {
  const double b = 5.0;
  return uniform_grid(length, dxi, b, b / kOmega0, kOmega0);
}

inline BoundaryValues flat_bc(const ContinuumGrid& g, double p_source, double v = 1.0) {
  BoundaryValues bv;
  bv.p_source = p_source;
  bv.bus_v.assign(g.segments.size() + 1, v);
  if (g.segments.size() > 1) bv.junction_jump.assign(g.segments.size() - 1, 0.0);
  return bv;
}

// Source flux switched on at t = t_on.
inline BoundarySchedule step_source(const ContinuumGrid& g, double p, double t_on = 0.0, double v = 1.0) {
  const BoundaryValues off = flat_bc(g, 0.0, v), on = flat_bc(g, p, v);
  return [off, on, t_on](double t) { return t > t_on ? on : off; };
}

inline double gaussian(double x, double c, double w) { return std::exp(-((x - c) * (x - c)) / (w * w)); }

// Delta theta = exp(-((xi - c)/w)^2) at rest: chi = 0, lam = -nu d(theta)/d(xi).
inline FieldState gaussian_bump(const ContinuumGrid& g, double c, double w, double amp = 1.0) {
  FieldState s = zero_state(g);
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double x = g.xi[i];
    s.delta_theta[i] = amp * gaussian(x, c, w);
    s.lam[i] = s.lam_left[i] = g.nu[i] * amp * 2 * (x - c) / (w * w) * gaussian(x, c, w);
  }
  return s;
}

}  // namespace emw::testing
