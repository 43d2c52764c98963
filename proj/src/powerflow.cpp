#include "emw/powerflow.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "emw/error.hpp"

namespace emw {

namespace {

Complex series_admittance(const Line& l) { return 1.0 / Complex(l.r, l.x); }

}  // namespace

AdmittanceMatrix build_ybus(const PowerCase& c) {
  AdmittanceMatrix y;
  const auto n = c.buses.size();
  y.bus_ids.reserve(n);
  for (const auto& b : c.buses) y.bus_ids.push_back(b.id);
  y.y = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& l : c.lines) {
    if (!l.in_service()) continue;
    const auto i = static_cast<Eigen::Index>(c.bus_index(l.from_bus));
    const auto k = static_cast<Eigen::Index>(c.bus_index(l.to_bus));
    const Complex ys = series_admittance(l);
    const Complex ysh(0.0, l.b_shunt / 2.0);
    y.y(i, i) += ys + ysh;
    y.y(k, k) += ys + ysh;
    y.y(i, k) -= ys;
    y.y(k, i) -= ys;
  }
  return y;
}

double scheduled_p(const PowerCase& c, int bus_id) {
  double mw = -c.buses[c.bus_index(bus_id)].p_load;
  for (const auto& g : c.generators) {
    if (g.bus == bus_id) mw += g.p_gen;
  }
  return mw / c.base_mva;
}

double scheduled_q(const PowerCase& c, int bus_id) {
  return -c.buses[c.bus_index(bus_id)].q_load / c.base_mva;
}

std::optional<std::size_t> PowerFlowSolution::find_bus(int id) const {
  for (std::size_t i = 0; i < bus_ids.size(); ++i) {
    if (bus_ids[i] == id) return i;
  }
  return std::nullopt;
}

std::size_t PowerFlowSolution::bus_index(int id) const {
  if (auto i = find_bus(id)) return *i;
  throw ReferenceError("bus " + std::to_string(id) + " is not in the power-flow solution");
}

Complex PowerFlowSolution::voltage(int bus_id) const {
  const auto i = bus_index(bus_id);
  return std::polar(v_mag[i], v_ang[i]);
}

PowerFlowSolution solve_power_flow(const PowerCase& c, const PowerFlowOptions& opt) {
  using Eigen::Index;
  const auto ybus = build_ybus(c);
  const Index n = static_cast<Index>(ybus.n());

  std::vector<Index> pvpq, pq;
  Index slack = -1;
  Eigen::VectorXd p_spec(n), q_spec(n), vm(n), va = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const auto& b = c.buses[static_cast<std::size_t>(i)];
    p_spec[i] = scheduled_p(c, b.id);
    q_spec[i] = scheduled_q(c, b.id);
    vm[i] = b.kind == BusKind::pq ? 1.0 : b.v_set;
    if (b.kind == BusKind::slack) {
      if (slack >= 0) throw DomainError("power flow needs exactly one slack bus");
      slack = i;
    } else {
      pvpq.push_back(i);
      if (b.kind == BusKind::pq) pq.push_back(i);
    }
  }
  if (slack < 0) throw DomainError("power flow needs exactly one slack bus");

  const Index npv = static_cast<Index>(pvpq.size());
  const Index npq = static_cast<Index>(pq.size());
  const Index dim = npv + npq;

  auto voltages = [&] {
    Eigen::VectorXcd v(n);
    for (Index i = 0; i < n; ++i) v[i] = std::polar(vm[i], va[i]);
    return v;
  };
  auto mismatch = [&](const Eigen::VectorXcd& v, Eigen::VectorXd& f) {
    const Eigen::VectorXcd s = v.cwiseProduct((ybus.y * v).conjugate());
    f.resize(dim);
    for (Index k = 0; k < npv; ++k) f[k] = s[pvpq[k]].real() - p_spec[pvpq[k]];
    for (Index k = 0; k < npq; ++k) f[npv + k] = s[pq[k]].imag() - q_spec[pq[k]];
    return dim == 0 ? 0.0 : f.cwiseAbs().maxCoeff();
  };

  PowerFlowSolution sol;
  Eigen::VectorXd f;
  Eigen::VectorXcd v = voltages();
  double norm = mismatch(v, f);
  int it = 0;
  while (norm > opt.tol) {
    if (it >= opt.max_iter) {
      throw ConvergenceError("power flow did not converge in " + std::to_string(opt.max_iter) +
                                 " iterations (mismatch " + std::to_string(norm) + " pu)",
                             norm);
    }
    ++it;
    // Complex sensitivities dS/dVa and dS/dVm (dense).
    const Eigen::VectorXcd ibus = ybus.y * v;
    const Eigen::VectorXcd vnorm = v.array() / v.array().abs();
    const Eigen::MatrixXcd dva = Complex(0, 1) * v.asDiagonal() *
                                 (Eigen::MatrixXcd(ibus.asDiagonal()) - ybus.y * v.asDiagonal()).conjugate();
    const Eigen::MatrixXcd dvm = v.asDiagonal() * (ybus.y * vnorm.asDiagonal()).conjugate() +
                                 Eigen::MatrixXcd(ibus.conjugate().asDiagonal()) * vnorm.asDiagonal();

    Eigen::MatrixXd jac(dim, dim);
    for (Index r = 0; r < npv; ++r) {
      for (Index k = 0; k < npv; ++k) jac(r, k) = dva(pvpq[r], pvpq[k]).real();
      for (Index k = 0; k < npq; ++k) jac(r, npv + k) = dvm(pvpq[r], pq[k]).real();
    }
    for (Index r = 0; r < npq; ++r) {
      for (Index k = 0; k < npv; ++k) jac(npv + r, k) = dva(pq[r], pvpq[k]).imag();
      for (Index k = 0; k < npq; ++k) jac(npv + r, npv + k) = dvm(pq[r], pq[k]).imag();
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) {
      throw NumericalError("singular power-flow Jacobian at iteration " + std::to_string(it));
    }
    const Eigen::VectorXd dx = lu.solve(-f);
    if (!dx.allFinite()) {
      throw NumericalError("non-finite power-flow update at iteration " + std::to_string(it));
    }
    for (Index k = 0; k < npv; ++k) va[pvpq[k]] += dx[k];
    for (Index k = 0; k < npq; ++k) vm[pq[k]] += dx[npv + k];
    v = voltages();
    norm = mismatch(v, f);
  }

  const Eigen::VectorXcd s = v.cwiseProduct((ybus.y * v).conjugate());
  sol.bus_ids = ybus.bus_ids;
  sol.v_mag.resize(static_cast<std::size_t>(n));
  sol.v_ang.resize(static_cast<std::size_t>(n));
  sol.p_inj.resize(static_cast<std::size_t>(n));
  sol.q_inj.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    sol.v_mag[u] = vm[i];
    sol.v_ang[u] = va[i];
    sol.p_inj[u] = s[i].real();
    sol.q_inj[u] = s[i].imag();
  }
  sol.iterations = it;
  sol.max_mismatch = norm;
  return sol;
}

LineFlow line_flow(const PowerFlowSolution& sol, const Line& line) {
  const Complex v1 = sol.voltage(line.from_bus);
  const Complex v2 = sol.voltage(line.to_bus);
  // G + jB = 1/Z*
  const Complex y_conj = 1.0 / std::conj(Complex(line.r, line.x));
  const double half_b = line.b_shunt / 2.0;
  LineFlow f;
  f.from = v1 * std::conj(v1 - v2) * y_conj - Complex(0, std::norm(v1) * half_b);
  f.to = v2 * std::conj(v2 - v1) * y_conj - Complex(0, std::norm(v2) * half_b);
  return f;
}

std::string power_flow_csv(const PowerFlowSolution& sol) {
  std::ostringstream os;
  os << "bus_id,v_mag_pu,v_ang_rad,p_inj_pu,q_inj_pu\n";
  char buf[160];
  for (std::size_t i = 0; i < sol.bus_ids.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.10f,%.10f,%.10f,%.10f\n", sol.bus_ids[i], sol.v_mag[i],
                  sol.v_ang[i], sol.p_inj[i], sol.q_inj[i]);
    os << buf;
  }
  return os.str();
}

}  // namespace emw
