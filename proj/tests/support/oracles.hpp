#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "emw/case_io.hpp"
#include "emw/case_model.hpp"
#include "emw/inertia.hpp"
#include "emw/powerflow.hpp"

#ifndef EMW_DATA_DIR
#define EMW_DATA_DIR "data"
#endif

namespace emw::testing {

inline std::string data_path(const std::string& name) { return std::string(EMW_DATA_DIR) + "/" + name; }

inline PowerCase case39() { return load_case_file(data_path("case39.m"), data_path("case39_dyn.json")); }

inline PowerCase two_bus() { return load_case_file(data_path("two_bus.json")); }

// Random connected network: a random spanning tree plus extra edges, bus 1 slack
// with a generator, further generators at random buses.
inline PowerCase random_case(std::mt19937_64& rng, int n_bus, int extra_edges, int n_gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PowerCase c;
  c.base_mva = 100;
  c.frequency_hz = 60;
  for (int i = 1; i <= n_bus; ++i) {
    Bus b;
    b.id = i;
    b.kind = i == 1 ? BusKind::slack : BusKind::pq;
    b.p_load = i == 1 ? 0.0 : 20 * u(rng);
    b.q_load = i == 1 ? 0.0 : 5 * u(rng);
    c.buses.push_back(b);
  }
  auto add_line = [&](int a, int b) {
    Line l;
    l.from_bus = a;
    l.to_bus = b;
    l.r = 0.05 * u(rng);
    l.x = 0.05 + 0.45 * u(rng);
    l.b_shunt = 0.1 * u(rng);
    l.length_miles = 1 + 49 * u(rng);
    c.lines.push_back(l);
  };
  for (int i = 2; i <= n_bus; ++i) add_line(1 + static_cast<int>(u(rng) * (i - 1)), i);
  for (int e = 0; e < extra_edges && n_bus > 2; ++e) {
    const int a = 1 + static_cast<int>(u(rng) * n_bus);
    int b = 1 + static_cast<int>(u(rng) * n_bus);
    if (a == b) b = a % n_bus + 1;
    add_line(a, b);
  }
  std::vector<int> gen_buses{1};
  for (int g = 1; g < n_gen; ++g) gen_buses.push_back(1 + static_cast<int>(u(rng) * n_bus));
  for (int bus : gen_buses) {
    Generator g;
    g.bus = bus;
    g.h_const = 1 + 9 * u(rng);
    g.mva_rating = 100 + 900 * u(rng);
    g.p_gen = bus == 1 ? 0.0 : 10 * u(rng);
    c.generators.push_back(g);
  }
  finalize_derived(c);
  return c;
}

struct OracleFlow {
  std::vector<double> vm, va;
  int iterations = 0;
};

// Gauss-Seidel with its own admittance assembly; PV buses hold |V| at v_set.
inline OracleFlow gauss_seidel(const PowerCase& c, double relax = 1.6, double tol = 1e-12, int max_iter = 200000) {
  using cd = std::complex<double>;
  const std::size_t n = c.buses.size();
  std::map<int, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[c.buses[i].id] = i;
  std::vector<std::vector<cd>> y(n, std::vector<cd>(n, 0.0));
  for (const auto& l : c.lines) {
    if (l.status != LineStatus::in_service) continue;
    const std::size_t f = idx.at(l.from_bus), t = idx.at(l.to_bus);
    const cd ys = 1.0 / cd(l.r, l.x);
    const cd sh(0.0, l.b_shunt / 2);
    y[f][f] += ys + sh;
    y[t][t] += ys + sh;
    y[f][t] -= ys;
    y[t][f] -= ys;
  }
  std::vector<double> p(n, 0.0), q(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = -c.buses[i].p_load / c.base_mva;
    q[i] = -c.buses[i].q_load / c.base_mva;
  }
  for (const auto& g : c.generators) p[idx.at(g.bus)] += g.p_gen / c.base_mva;

  std::vector<cd> v(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (c.buses[i].kind != BusKind::pq) v[i] = c.buses[i].v_set;
  }
  OracleFlow out;
  for (int it = 1; it <= max_iter; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto kind = c.buses[i].kind;
      if (kind == BusKind::slack) continue;
      cd sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) sum += y[i][k] * v[k];
      }
      double qi = q[i];
      if (kind == BusKind::pv) qi = -std::imag(std::conj(v[i]) * (sum + y[i][i] * v[i]));
      cd vn = (cd(p[i], -qi) / std::conj(v[i]) - sum) / y[i][i];
      if (kind == BusKind::pv) {
        vn = std::polar(c.buses[i].v_set, std::arg(vn));
      } else {
        vn = v[i] + relax * (vn - v[i]);
      }
      change = std::max(change, std::abs(vn - v[i]));
      v[i] = vn;
    }
    out.iterations = it;
    if (change < tol) break;
  }
  const double ref = std::arg(v[idx.at(std::find_if(c.buses.begin(), c.buses.end(), [](const Bus& b) {
                                        return b.kind == BusKind::slack;
                                      })->id)]);
  for (const auto& vi : v) {
    out.vm.push_back(std::abs(vi));
    out.va.push_back(std::arg(vi) - ref);
  }
  return out;
}

struct OraclePath {
  std::vector<int> buses;
  double time = std::numeric_limits<double>::infinity();
};

// Exhaustive enumeration of simple paths; edge time is length over
// sqrt(V^2 (L/x) / (j_h w0)) with V the mean end-bus magnitude.
inline OraclePath brute_force_path(const PowerCase& c, const InertiaMap& map, const PowerFlowSolution& sol, int src,
                                   int dst) {
  OraclePath best;
  std::vector<int> stack{src};
  std::vector<int> seen{src};
  std::function<void(double)> dfs = [&](double t) {
    const int at = stack.back();
    if (at == dst) {
      if (t < best.time) {
        best.time = t;
        best.buses = stack;
      }
      return;
    }
    for (std::size_t li = 0; li < c.lines.size(); ++li) {
      const auto& l = c.lines[li];
      if (l.status != LineStatus::in_service || map.j_per_mile[li] <= 0) continue;
      if (l.from_bus != at && l.to_bus != at) continue;
      const int nb = l.from_bus == at ? l.to_bus : l.from_bus;
      if (std::find(seen.begin(), seen.end(), nb) != seen.end()) continue;
      const double vv = 0.5 * (sol.v_mag[sol.bus_index(l.from_bus)] + sol.v_mag[sol.bus_index(l.to_bus)]);
      const double vel = std::sqrt(vv * vv * (l.length_miles / l.x) / (map.j_per_mile[li] * c.omega0));
      stack.push_back(nb);
      seen.push_back(nb);
      dfs(t + l.length_miles / vel);
      stack.pop_back();
      seen.pop_back();
    }
  };
  dfs(0.0);
  return best;
}

}  // namespace emw::testing
