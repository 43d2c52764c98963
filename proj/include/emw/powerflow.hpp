#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emw/case_model.hpp"

namespace emw {

using Complex = std::complex<double>;

/// Bus admittance matrix; rows/columns follow PowerCase::buses order.
struct AdmittanceMatrix {
  std::vector<int> bus_ids;
  Eigen::MatrixXcd y;

  std::size_t n() const noexcept { return bus_ids.size(); }
};

AdmittanceMatrix build_ybus(const PowerCase& c);

struct PowerFlowOptions {
  double tol = 1e-8;
  int max_iter = 25;
};

struct PowerFlowSolution {
  std::vector<int> bus_ids;
  std::vector<double> v_mag;
  std::vector<double> v_ang;
  std::vector<double> p_inj;  // per-unit, positive into the network
  std::vector<double> q_inj;
  int iterations = 0;
  double max_mismatch = 0.0;

  std::optional<std::size_t> find_bus(int id) const;
  std::size_t bus_index(int id) const;
  Complex voltage(int bus_id) const;
};

/// Newton-Raphson in polar form from a flat start. PV reactive limits are
/// not enforced. Throws ConvergenceError (carrying the final mismatch) or
/// NumericalError when the Jacobian is singular.
PowerFlowSolution solve_power_flow(const PowerCase& c, const PowerFlowOptions& opt = {});

struct LineFlow {
  Complex from;  // S leaving from_bus into the line
  Complex to;    // S leaving to_bus into the line
};

/// Pi-model flow S = V1 (V1 - V2)^* (G + jB) - j V1^2 Bc/2 evaluated at both ends.
LineFlow line_flow(const PowerFlowSolution& sol, const Line& line);

/// Specified net injection (generation minus load) at a bus, per-unit.
double scheduled_p(const PowerCase& c, int bus_id);
double scheduled_q(const PowerCase& c, int bus_id);

/// CSV with header bus_id,v_mag_pu,v_ang_rad,p_inj_pu,q_inj_pu.
std::string power_flow_csv(const PowerFlowSolution& sol);

}  // namespace emw
