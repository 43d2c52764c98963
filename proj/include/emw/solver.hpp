#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "emw/case_model.hpp"
#include "emw/continuum.hpp"
#include "emw/graph_path.hpp"

namespace emw {

enum class Model { homogeneous, nonhomogeneous };
enum class BoundaryMode { characteristic, fictitious };
enum class FarEnd { absorbing, fixed_angle, fixed_power };

struct SolverConfig {
  double courant = 0.9;
  double t_end = 5.0;
  Model model = Model::nonhomogeneous;
  BoundaryMode boundary_mode = BoundaryMode::characteristic;
  FarEnd far_end = FarEnd::fixed_angle;
  std::size_t record_stride = 1;
  double record_dt = 0.0;      // > 0: snapshots at least this far apart in time
  double dxi = 0.02;           // miles, used by simulate()
  double dt = 0.0;             // 0: derived from the CFL limit
  double blowup_factor = 1e3;  // instability when max|chi| exceeds this times the forced scale
  bool parallel = true;        // OpenMP interior kernel
};

/// Throws DomainError naming the offending field.
void check_config(const SolverConfig& cfg);

/// Values imposed at the path ends and junctions at one instant.
struct BoundaryValues {
  double p_source = 0.0;               // power flux into the path at xi = 0, per unit
  double p_far = 0.0;                  // imposed flux at the far end (fixed_power)
  std::vector<double> bus_v;           // one per bus marker, in grid order
  std::vector<double> junction_jump;   // P_out - P_in at each junction, per unit
};

using BoundarySchedule = std::function<BoundaryValues(double t)>;

struct WaveField {
  ContinuumGrid grid;
  std::vector<double> times;
  std::vector<FieldState> snapshots;
  std::size_t steps = 0;
  double dt = 0.0;
};

/// dt = courant * dxi / max(nu * V); DomainError when the maximum speed is zero.
double cfl_timestep(const ContinuumGrid& grid, const std::vector<double>& v, double courant);

/// One time step of the EMW system. Interior points use the Richtmyer scheme;
/// path ends and junctions use the configured boundary treatment. Throws
/// InstabilityError naming the step and index on a non-finite value.
FieldState step_emw(const FieldState& s, const ContinuumGrid& grid, const BoundaryValues& bc, double dt,
                    const SolverConfig& cfg, std::size_t step = 0);

/// Time integration with snapshot recording and the blow-up detector.
class EmwIntegrator {
 public:
  EmwIntegrator(ContinuumGrid grid, SolverConfig cfg, BoundarySchedule schedule);

  void set_initial(FieldState s);
  const FieldState& state() const noexcept { return state_; }
  double dt() const noexcept { return dt_; }
  std::size_t total_steps() const noexcept { return total_steps_; }

  WaveField run();

 private:
  ContinuumGrid grid_;
  SolverConfig cfg_;
  BoundarySchedule schedule_;
  FieldState state_;
  double dt_ = 0.0;
  std::size_t total_steps_ = 0;
};

/// Full pipeline on a case: phase power flows, inertia distribution, path
/// discretization and integration from the source bus (path.buses.front()).
WaveField simulate(const PowerCase& c, const Disturbance& d, const EmwPath& path, const SolverConfig& cfg);

/// Per-phase boundary data used by simulate(). Every bus marker switches phase
/// once the front can have reached it: delay[m] is the travel time to marker m
/// from the path bus nearest the disturbance (the source when the disturbance
/// is off the path) at the pre-disturbance speeds.
struct PhaseBoundary {
  BoundaryValues pre, during, post;
  std::vector<double> delay;
};
PhaseBoundary phase_boundaries(const PowerCase& c, const Disturbance& d, const EmwPath& path,
                               const ContinuumGrid& grid, Model model);

/// Boundary values at time t, each marker taking the phase of t - delay[m].
BoundaryValues boundary_at(const PhaseBoundary& pb, const Disturbance& d, double t);

std::string to_string(Model m);
std::string to_string(BoundaryMode m);
std::string to_string(FarEnd f);
Model parse_model(const std::string& s);
BoundaryMode parse_boundary_mode(const std::string& s);
FarEnd parse_far_end(const std::string& s);

}  // namespace emw
