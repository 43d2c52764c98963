#include "emw/error.hpp"
#include "emw/kernels.hpp"

namespace emw {

namespace serial {

void richtmyer_emw(const EmwKernelArgs& k) {
  const double* lam = k.lam;
  const double* chi = k.chi;
  const double* a = k.a;
  const double* c = k.c;
  const double hr = 0.5 * k.r;
  for (std::size_t i = 1; i + 1 < k.n; ++i) {
    // Half-step states at i-1/2 and i+1/2.
    const double lm = 0.5 * (lam[i - 1] + lam[i]) - hr * (a[i] * chi[i] - a[i - 1] * chi[i - 1]);
    const double cm = 0.5 * (chi[i - 1] + chi[i]) - hr * (c[i] * lam[i] - c[i - 1] * lam[i - 1]);
    const double lp = 0.5 * (lam[i] + lam[i + 1]) - hr * (a[i + 1] * chi[i + 1] - a[i] * chi[i]);
    const double cp = 0.5 * (chi[i] + chi[i + 1]) - hr * (c[i + 1] * lam[i + 1] - c[i] * lam[i]);
    const double am = 0.5 * (a[i - 1] + a[i]), ap = 0.5 * (a[i] + a[i + 1]);
    const double ccm = 0.5 * (c[i - 1] + c[i]), ccp = 0.5 * (c[i] + c[i + 1]);
    k.lam_out[i] = lam[i] - k.r * (ap * cp - am * cm);
    k.chi_out[i] = chi[i] - k.r * (ccp * lp - ccm * lm);
  }
}

}  // namespace serial

StateField lw_linear_step(const StateField& u, const Eigen::MatrixXd& a, double dxi, double dt) {
  const auto m = static_cast<Eigen::Index>(u.size());
  if (a.rows() != m || a.cols() != m) throw DomainError("flux matrix does not match the state size");
  if (u.empty()) return u;
  const std::size_t n = u[0].size();
  const Eigen::MatrixXd a2 = a * a;
  const double r1 = dt / (2 * dxi);
  const double r2 = dt * dt / (2 * dxi * dxi);
  StateField out = u;
  Eigen::VectorXd d1(m), d2(m);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (Eigen::Index q = 0; q < m; ++q) {
      const auto& f = u[static_cast<std::size_t>(q)];
      d1[q] = f[i + 1] - f[i - 1];
      d2[q] = f[i + 1] - 2 * f[i] + f[i - 1];
    }
    const Eigen::VectorXd du = -r1 * (a * d1) + r2 * (a2 * d2);
    for (Eigen::Index q = 0; q < m; ++q) out[static_cast<std::size_t>(q)][i] += du[q];
  }
  return out;
}

StateField richtmyer_step(const StateField& u, const FluxFn& flux, double dxi, double dt) {
  if (u.empty()) return u;
  const std::size_t m = u.size();
  const std::size_t n = u[0].size();
  const double r = dt / dxi;
  auto point = [&](std::size_t i) {
    std::vector<double> s(m);
    for (std::size_t q = 0; q < m; ++q) s[q] = u[q][i];
    return s;
  };
  std::vector<std::vector<double>> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = flux(point(i), i);
  // Half-step fluxes at i+1/2, i = 0..n-2.
  std::vector<std::vector<double>> fh(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<double> h(m);
    for (std::size_t q = 0; q < m; ++q) h[q] = 0.5 * (u[q][i] + u[q][i + 1]) - 0.5 * r * (f[i + 1][q] - f[i][q]);
    fh[i] = flux(h, i);
  }
  StateField out = u;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t q = 0; q < m; ++q) out[q][i] = u[q][i] - r * (fh[i][q] - fh[i - 1][q]);
  }
  return out;
}

}  // namespace emw
