#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "emw/analysis.hpp"
#include "emw/error.hpp"
#include "emw/solver.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace emw;
using emw::testing::flat_bc;
using emw::testing::step_source;
using emw::testing::unit_speed_line;

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

SolverConfig fixed_step(double dt, double t_end, Model model = Model::nonhomogeneous) {
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.model = model;
  cfg.far_end = FarEnd::absorbing;
  return cfg;
}

}  // namespace

TEST(Cfl, Examples) {
  const auto g = unit_speed_line(2.0, 0.2);
  const std::vector<double> v(g.n_points, 1.0);
  EXPECT_NEAR(cfl_timestep(g, v, 1.0), 0.2, 1e-14);
  EXPECT_NEAR(cfl_timestep(g, v, 0.9), 0.18, 1e-14);
  std::vector<double> v2 = v;
  v2[3] = 2.0;
  EXPECT_NEAR(cfl_timestep(g, v2, 1.0), 0.1, 1e-14);
  EXPECT_THROW(cfl_timestep(g, std::vector<double>(g.n_points, 0.0), 1.0), DomainError);
}

TEST(Config, RejectsBadValues) {
  SolverConfig cfg;
  cfg.courant = 0;
  EXPECT_THROW(check_config(cfg), DomainError);
  cfg = {};
  cfg.t_end = -1;
  EXPECT_THROW(check_config(cfg), DomainError);
  cfg = {};
  cfg.record_stride = 0;
  EXPECT_THROW(check_config(cfg), DomainError);
  EXPECT_EQ(parse_model("hom"), Model::homogeneous);
  EXPECT_EQ(parse_far_end("absorbing"), FarEnd::absorbing);
  EXPECT_THROW(parse_boundary_mode("reflect"), DomainError);
}

TEST(StepEmw, ZeroStateStaysZero) {
  const auto g = unit_speed_line(5.0, 0.1);
  SolverConfig cfg;
  const FieldState s = zero_state(g);
  const FieldState out = step_emw(s, g, flat_bc(g, 0.0), 0.05, cfg);
  EXPECT_EQ(max_abs(out.chi), 0.0);
  EXPECT_EQ(max_abs(out.lam), 0.0);
  EXPECT_EQ(max_abs(out.delta_theta), 0.0);
}

TEST(StepEmw, UnitVoltageMatchesHomogeneous) {
  const auto g = unit_speed_line(10.0, 0.1);
  const FieldState s = emw::testing::gaussian_bump(g, 5.0, 1.0);
  SolverConfig hom, non;
  hom.model = Model::homogeneous;
  const auto a = step_emw(s, g, flat_bc(g, 0.3), 0.05, hom);
  const auto b = step_emw(s, g, flat_bc(g, 0.3), 0.05, non);
  EXPECT_EQ(a.chi, b.chi);
  EXPECT_EQ(a.lam, b.lam);
  EXPECT_EQ(a.gamma, b.lam);
}

TEST(StepEmw, DAlembertSplit) {
  const auto g = unit_speed_line(20.0, 0.025);
  EmwIntegrator it(g, fixed_step(0.0125, 5.0), step_source(g, 0.0));
  it.set_initial(emw::testing::gaussian_bump(g, 10.0, 1.0));
  const auto w = it.run();
  const auto& th = w.snapshots.back().delta_theta;
  const double t = w.times.back();
  double err = 0;
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double x = g.xi[i];
    const double exact = 0.5 * (emw::testing::gaussian(x - t, 10.0, 1.0) + emw::testing::gaussian(x + t, 10.0, 1.0));
    err = std::max(err, std::abs(th[i] - exact));
  }
  EXPECT_LT(err, 2e-3);
  const auto peak = amplitude_profile(w);
  (void)peak;
  double right_peak = 0;
  for (std::size_t i = 0; i < g.n_points; ++i) {
    if (g.xi[i] > 12.5) right_peak = std::max(right_peak, th[i]);
  }
  EXPECT_NEAR(right_peak, 0.5, 5e-3);
}

TEST(StepEmw, GammaCoupling) {
  const auto g = build_grid({{3.0, 5.0, 0.0, 5.0 / emw::testing::kOmega0, 1, 2, -1},
                             {2.0, 3.0, 0.0, 1.0 / emw::testing::kOmega0, 2, 3, -1}},
                            0.05, emw::testing::kOmega0);
  BoundaryValues bv = flat_bc(g, 0.2);
  bv.bus_v = {1.02, 0.97, 1.01};
  bv.junction_jump = {0.05};
  SolverConfig cfg;
  cfg.t_end = 2.0;
  EmwIntegrator it(g, cfg, [bv](double) { return bv; });
  const auto w = it.run();
  for (const auto& s : w.snapshots) {
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_LE(std::abs(s.gamma[i] - s.v[i] * s.v[i] * s.lam[i]), 1e-12);
  }
}

TEST(Integrator, TimesStrictlyIncreasing) {
  const auto g = unit_speed_line(5.0, 0.1);
  SolverConfig cfg;
  cfg.t_end = 1.0;
  cfg.record_stride = 3;
  EmwIntegrator it(g, cfg, step_source(g, 0.1));
  const auto w = it.run();
  for (std::size_t k = 1; k < w.times.size(); ++k) EXPECT_GT(w.times[k], w.times[k - 1]);
  EXPECT_NEAR(w.times.back(), 1.0, 1e-12);
  EXPECT_EQ(w.steps, it.total_steps());
}

TEST(Integrator, StableAtCourant09) {
  const auto g = unit_speed_line(10.0, 0.1);
  const double p = 0.5;
  SolverConfig cfg = fixed_step(0.09, 0.09 * 10000);
  EmwIntegrator it(g, cfg, step_source(g, p));
  const auto w = it.run();
  EXPECT_EQ(w.steps, 10000u);
  double m = 0;
  for (const auto& s : w.snapshots) m = std::max(m, max_abs(s.chi));
  EXPECT_LE(m, 10 * p / 5.0);
}

TEST(Integrator, UnstableAtCourant15) {
  const auto g = unit_speed_line(10.0, 0.1);
  SolverConfig cfg = fixed_step(0.15, 0.15 * 2000);
  EmwIntegrator it(g, cfg, step_source(g, 0.5));
  try {
    it.run();
    FAIL() << "expected InstabilityError";
  } catch (const InstabilityError& e) {
    EXPECT_LE(e.step(), 2000u);
    EXPECT_LT(e.index(), g.n_points);
  }
}

TEST(Integrator, SerialAndParallelAgree) {
  const auto g = build_grid({{3.0, 5.0, 0.0, 5.0 / emw::testing::kOmega0, 1, 2, -1},
                             {2.0, 3.0, 0.0, 1.0 / emw::testing::kOmega0, 2, 3, -1}},
                            0.01, emw::testing::kOmega0);
  SolverConfig a;
  a.t_end = 1.0;
  SolverConfig b = a;
  b.parallel = false;
  const auto wa = EmwIntegrator(g, a, step_source(g, 0.2)).run();
  const auto wb = EmwIntegrator(g, b, step_source(g, 0.2)).run();
  EXPECT_EQ(wa.snapshots.back().chi, wb.snapshots.back().chi);
  EXPECT_EQ(wa.snapshots.back().delta_theta, wb.snapshots.back().delta_theta);
}

TEST(Integrator, FrontSpeedUniformMedium) {
  const auto g = unit_speed_line(30.0, 0.05);
  SolverConfig cfg;
  cfg.t_end = 25.0;
  cfg.far_end = FarEnd::absorbing;
  const auto w = EmwIntegrator(g, cfg, step_source(g, 1.0)).run();
  const auto curve = detect_arrival_times(w);
  const auto v = estimate_velocity(curve, 5.0, 25.0);
  EXPECT_NEAR(v.velocity, 1.0, 0.02);
  EXPECT_GT(v.r2, 0.999);
}

TEST(Integrator, FictitiousModeStaysBounded) {
  const auto g = unit_speed_line(10.0, 0.1);
  SolverConfig cfg;
  cfg.t_end = 30.0;
  cfg.boundary_mode = BoundaryMode::fictitious;
  const auto w = EmwIntegrator(g, cfg, step_source(g, 0.5)).run();
  double m = 0;
  for (const auto& s : w.snapshots) m = std::max(m, max_abs(s.chi));
  EXPECT_LT(m, 10 * 0.5 / 5.0);
}

TEST(Simulate, ZeroMagnitudeGivesZeroField) {
  const PowerCase c = emw::testing::case39();
  const auto path = shortest_emw_path(c, distribute_inertia(c), solve_power_flow(c), 39, 31);
  Disturbance d;
  d.target_bus = 39;
  d.magnitude_fraction = 0.0;
  d.t_start = 0.1;
  SolverConfig cfg;
  cfg.t_end = 0.5;
  cfg.record_stride = 50;
  const auto w = simulate(c, d, path, cfg);
  for (const auto& s : w.snapshots) {
    EXPECT_EQ(max_abs(s.chi), 0.0);
    EXPECT_EQ(max_abs(s.delta_theta), 0.0);
  }
}

TEST(Simulate, LowerInertiaLargerDeviation) {
  const PowerCase base = emw::testing::two_bus();
  const auto sc = parse_scenario_json(read_text_file(emw::testing::data_path("scenarios/two_bus_load_step.json")));
  const auto path = shortest_emw_path(base, distribute_inertia(base), solve_power_flow(base), 2, 1);
  SolverConfig cfg;
  cfg.t_end = 2.0;
  cfg.record_dt = 1e-3;
  auto peak = [&](double h) {
    PowerCase c = base;
    for (auto& g : c.generators) g.h_const = h;
    finalize_derived(c);
    return max_abs(amplitude_profile(simulate(c, sc.disturbance, path, cfg)));
  };
  EXPECT_GT(peak(1.5), peak(15.0));
}

TEST(Simulate, LargestOnFirstSegmentOfLoadStep) {
  const PowerCase c = emw::testing::case39();
  const auto sc = parse_scenario_json(read_text_file(emw::testing::data_path("scenarios/case39_load_step.json")));
  const auto path = shortest_emw_path(c, distribute_inertia(c), solve_power_flow(c), 39, 31);
  SolverConfig cfg;
  cfg.t_end = 3.0;
  cfg.record_dt = 1e-3;
  const auto w = simulate(c, sc.disturbance, path, cfg);
  const auto peaks = segment_mean_peaks(amplitude_profile(w), w.grid);
  EXPECT_GT(peaks.front(), peaks.back());
}

TEST(Simulate, SerialAndParallelAgreeOnCase39) {
  const PowerCase c = emw::testing::case39();
  const auto sc = parse_scenario_json(read_text_file(emw::testing::data_path("scenarios/case39_outage_6_7.json")));
  const auto path = shortest_emw_path(c, distribute_inertia(c), solve_power_flow(c), 31, 39);
  Disturbance d = sc.disturbance;
  d.t_start = 0.05;
  SolverConfig a;
  a.t_end = 0.4;
  a.record_stride = 100;
  SolverConfig b = a;
  b.parallel = false;
  const auto wa = simulate(c, d, path, a);
  const auto wb = simulate(c, d, path, b);
  ASSERT_EQ(wa.snapshots.size(), wb.snapshots.size());
  EXPECT_EQ(wa.snapshots.back().chi, wb.snapshots.back().chi);
  EXPECT_EQ(wa.snapshots.back().v, wb.snapshots.back().v);
}

TEST(Simulate, PhaseDelaysStartAtDisturbance) {
  const PowerCase c = emw::testing::case39();
  const auto map = distribute_inertia(c);
  const auto path = shortest_emw_path(c, map, solve_power_flow(c), 31, 39);
  const auto grid = discretize_path(path, c, map, 0.02);
  Disturbance d;
  d.kind = DisturbanceKind::line_outage;
  d.target_line = "6-7";
  d.t_start = 1.0;
  d.duration = 0.1;
  const auto pb = phase_boundaries(c, d, path, grid, Model::nonhomogeneous);
  ASSERT_EQ(pb.delay.size(), path.buses.size());
  EXPECT_EQ(pb.delay[1], 0.0);
  EXPECT_GT(pb.delay[0], 0.0);
  for (std::size_t m = 2; m < pb.delay.size(); ++m) EXPECT_GT(pb.delay[m], pb.delay[m - 1]);
}
