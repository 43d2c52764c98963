#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace emw {

/// Two-component system lam_t + (a chi)_x = 0, chi_t + (c lam)_x = 0 with
/// per-point coefficients. Updates points 1..n-2 with the two-step Richtmyer
/// scheme, r = dt/dxi; points 0 and n-1 of the outputs are left untouched.
struct EmwKernelArgs {
  std::size_t n = 0;
  const double* lam = nullptr;
  const double* chi = nullptr;
  const double* a = nullptr;
  const double* c = nullptr;
  double r = 0.0;
  double* lam_out = nullptr;
  double* chi_out = nullptr;
};

namespace serial {
void richtmyer_emw(const EmwKernelArgs& k);
}

namespace omp {
void richtmyer_emw(const EmwKernelArgs& k);
}

/// State as components x points.
using StateField = std::vector<std::vector<double>>;

/// Single-step Lax-Wendroff for u_t + A u_x = 0 on a uniform grid; end points unchanged.
StateField lw_linear_step(const StateField& u, const Eigen::MatrixXd& a, double dxi, double dt);

/// Point flux: state at a point (and its index) -> flux vector.
using FluxFn = std::function<std::vector<double>(const std::vector<double>&, std::size_t)>;

/// Generic Richtmyer two-step update; the half-step flux is evaluated at index i
/// for the midpoint i+1/2. End points unchanged.
StateField richtmyer_step(const StateField& u, const FluxFn& flux, double dxi, double dt);

}  // namespace emw
