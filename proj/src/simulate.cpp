#include <algorithm>
#include <cmath>

#include "emw/error.hpp"
#include "emw/inertia.hpp"
#include "emw/powerflow.hpp"
#include "emw/solver.hpp"

namespace emw {

namespace {

// Active power leaving each path bus into the next path line, per unit.
std::vector<double> sending_flows(const PowerCase& c, const PowerFlowSolution& sol, const EmwPath& path) {
  std::vector<double> p(path.lines.size(), 0.0);
  for (std::size_t k = 0; k < path.lines.size(); ++k) {
    const auto& l = c.lines[path.lines[k]];
    if (!l.in_service()) continue;
    const auto f = line_flow(sol, l);
    p[k] = path.buses[k] == l.from_bus ? f.from.real() : f.to.real();
  }
  return p;
}

// Flow deltas and bus voltages of a solved phase, extrapolated by `gain` from
// the pre-disturbance state.
BoundaryValues phase_values(const PowerCase& c, const PowerFlowSolution& sol, const PowerFlowSolution& sol_pre,
                            const std::vector<double>& p_pre, const EmwPath& path, const ContinuumGrid& grid,
                            Model model, double gain) {
  const auto p = sending_flows(c, sol, path);
  BoundaryValues bv;
  std::vector<double> dp(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) dp[k] = gain * (p[k] - p_pre[k]);
  bv.p_source = dp.front();
  bv.p_far = dp.back();
  for (std::size_t k = 0; k + 1 < dp.size(); ++k) bv.junction_jump.push_back(dp[k + 1] - dp[k]);
  for (const auto& [i, id] : grid.bus_markers) {
    const double v0 = sol_pre.v_mag[sol_pre.bus_index(id)];
    const double v1 = sol.v_mag[sol.bus_index(id)];
    bv.bus_v.push_back(model == Model::homogeneous ? 1.0 : v0 + gain * (v1 - v0));
  }
  return bv;
}

// A load step with no steady state is solved at the largest convergent
// fraction 2^-k of its magnitude and extrapolated linearly.
BoundaryValues solve_phase(const PowerCase& c, const Disturbance& d, Phase phase, const PowerFlowSolution& sol_pre,
                           const std::vector<double>& p_pre, const EmwPath& path, const ContinuumGrid& grid,
                           Model model) {
  try {
    const PowerCase cd = apply_disturbance(c, d, phase);
    return phase_values(cd, solve_power_flow(cd), sol_pre, p_pre, path, grid, model, 1.0);
  } catch (const ConvergenceError&) {
    if (d.kind != DisturbanceKind::load_step) throw;
  }
  for (int k = 1; k <= 10; ++k) {
    Disturbance ds = d;
    const double frac = std::ldexp(1.0, -k);
    ds.magnitude_fraction *= frac;
    try {
      const PowerCase cd = apply_disturbance(c, ds, phase);
      return phase_values(cd, solve_power_flow(cd), sol_pre, p_pre, path, grid, model, 1.0 / frac);
    } catch (const ConvergenceError&) {
    }
  }
  throw ConvergenceError("no power-flow solution for any fraction of the load step", 0.0);
}

// Path bus closest to the disturbance: the stepped bus or an end of the
// outaged line, else the source.
std::size_t origin_marker(const PowerCase& c, const Disturbance& d, const EmwPath& path) {
  std::vector<int> ids;
  if (d.kind == DisturbanceKind::load_step) {
    ids.push_back(d.target_bus);
  } else {
    const auto& l = c.lines[c.line_index(d.target_line)];
    ids = {l.from_bus, l.to_bus};
  }
  for (std::size_t m = 0; m < path.buses.size(); ++m) {
    if (std::find(ids.begin(), ids.end(), path.buses[m]) != ids.end()) return m;
  }
  return 0;
}

}  // namespace

PhaseBoundary phase_boundaries(const PowerCase& c, const Disturbance& d, const EmwPath& path,
                               const ContinuumGrid& grid, Model model) {
  check_disturbance(d);
  if (path.lines.empty()) throw DomainError("phase boundaries need a path with lines");
  const auto sol_pre = solve_power_flow(c);
  const auto p_pre = sending_flows(c, sol_pre, path);

  PhaseBoundary pb;
  pb.pre = phase_values(c, sol_pre, sol_pre, p_pre, path, grid, model, 1.0);
  pb.during = solve_phase(c, d, Phase::during, sol_pre, p_pre, path, grid, model);
  if (std::isfinite(d.t_end())) {
    pb.post = solve_phase(c, d, Phase::post, sol_pre, p_pre, path, grid, model);
  } else {
    pb.post = pb.during;
  }
  std::vector<double> reach{0.0};
  for (const auto& seg : grid.segments) {
    const std::size_t m = reach.size();
    const double v = 0.5 * (pb.pre.bus_v[m - 1] + pb.pre.bus_v[m]);
    reach.push_back(reach.back() + (grid.xi[seg.end] - grid.xi[seg.begin]) / (seg.nu * v));
  }
  const std::size_t origin = origin_marker(c, d, path);
  for (double r : reach) pb.delay.push_back(std::abs(r - reach[origin]));
  return pb;
}

BoundaryValues boundary_at(const PhaseBoundary& pb, const Disturbance& d, double t) {
  auto pick = [&](std::size_t marker) -> const BoundaryValues& {
    switch (d.phase_at(t - pb.delay[marker])) {
      case Phase::pre: return pb.pre;
      case Phase::during: return pb.during;
      case Phase::post: return pb.post;
    }
    return pb.pre;
  };
  BoundaryValues bv = pb.pre;
  const std::size_t last = pb.delay.size() - 1;
  bv.p_source = pick(0).p_source;
  bv.p_far = pick(last).p_far;
  for (std::size_t m = 0; m <= last; ++m) bv.bus_v[m] = pick(m).bus_v[m];
  for (std::size_t j = 0; j < bv.junction_jump.size(); ++j) bv.junction_jump[j] = pick(j + 1).junction_jump[j];
  return bv;
}

WaveField simulate(const PowerCase& c, const Disturbance& d, const EmwPath& path, const SolverConfig& cfg) {
  check_config(cfg);
  check_disturbance(d);
  PowerCase base = c;
  finalize_derived(base);
  const InertiaMap map = distribute_inertia(base);
  ContinuumGrid grid = discretize_path(path, base, map, cfg.dxi);
  const PhaseBoundary pb = phase_boundaries(base, d, path, grid, cfg.model);

  BoundarySchedule schedule = [pb, d](double t) { return boundary_at(pb, d, t); };
  EmwIntegrator integrator(std::move(grid), cfg, schedule);
  return integrator.run();
}

}  // namespace emw
