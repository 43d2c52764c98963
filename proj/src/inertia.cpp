#include "emw/inertia.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "emw/error.hpp"

namespace emw {

namespace {

struct Topology {
  std::vector<std::vector<std::size_t>> incident;  // per bus index, in-service lines by line index
  std::vector<std::size_t> from, to;               // bus indices per line
  std::vector<double> y;                           // |1/(r+jx)| per line
  std::vector<char> is_gen;                        // per bus index
};

Topology build_topology(const PowerCase& c) {
  Topology t;
  t.incident.resize(c.buses.size());
  t.from.resize(c.lines.size());
  t.to.resize(c.lines.size());
  t.y.assign(c.lines.size(), 0.0);
  for (std::size_t k = 0; k < c.lines.size(); ++k) {
    const auto& l = c.lines[k];
    t.from[k] = c.bus_index(l.from_bus);
    t.to[k] = c.bus_index(l.to_bus);
    if (!l.in_service()) continue;
    t.y[k] = std::abs(1.0 / std::complex<double>(l.r, l.x));
    t.incident[t.from[k]].push_back(k);
    t.incident[t.to[k]].push_back(k);
  }
  t.is_gen.assign(c.buses.size(), 0);
  for (const auto& g : c.generators) t.is_gen[c.bus_index(g.bus)] = 1;
  return t;
}

void check_connectivity(const PowerCase& c, const Topology& t) {
  const std::size_t n = c.buses.size();
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s}, members;
    comp[s] = ncomp;
    bool has_gen = false;
    bool has_line = false;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      members.push_back(u);
      has_gen = has_gen || t.is_gen[u];
      for (auto k : t.incident[u]) {
        has_line = true;
        auto w = t.from[k] == u ? t.to[k] : t.from[k];
        if (comp[w] < 0) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
      }
    }
    ++ncomp;
    if (has_line && !has_gen) {
      std::sort(members.begin(), members.end());
      std::string ids;
      for (auto m : members) ids += (ids.empty() ? "" : ",") + std::to_string(c.buses[m].id);
      throw DomainError("connected component {" + ids + "} has no generator to supply inertia");
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (t.is_gen[u] && t.incident[u].empty() && !c.lines.empty()) {
      throw DomainError("generator bus " + std::to_string(c.buses[u].id) + " has no in-service line");
    }
  }
}

struct Result {
  std::vector<double> deposit;
  int rounds = 0;
  double folded = 0.0;
};

// One generator bus's wavefront. Packets are keyed by 2*line + side, side 0
// meaning "arriving at to-bus", side 1 "arriving at from-bus".
Result spread_from(const Topology& t, std::size_t gen_bus, double inertia, const InertiaOptions& opt) {
  const std::size_t m = t.y.size();
  Result res;
  res.deposit.assign(m, 0.0);
  if (inertia == 0.0) return res;

  std::vector<double> flight(2 * m, 0.0), next(2 * m, 0.0);
  auto send = [&](std::vector<double>& buf, std::size_t line, std::size_t from_bus, double amount) {
    buf[2 * line + (t.from[line] == from_bus ? 0 : 1)] += amount;
  };

  const auto& seed = t.incident[gen_bus];
  const double ysum = std::accumulate(seed.begin(), seed.end(), 0.0,
                                      [&](double a, std::size_t k) { return a + t.y[k]; });
  for (auto k : seed) send(flight, k, gen_bus, inertia * t.y[k] / ysum);

  const double stop = opt.tol * std::abs(inertia);
  int round = 0;
  for (;;) {
    double in_flight = 0.0;
    for (double a : flight) in_flight += std::abs(a);
    if (in_flight < stop || round >= opt.max_rounds) break;
    ++round;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t key = 0; key < 2 * m; ++key) {
      const double a = flight[key];
      if (a == 0.0) continue;
      const std::size_t line = key / 2;
      const std::size_t at = (key % 2 == 0) ? t.to[line] : t.from[line];
      if (t.is_gen[at]) {
        res.deposit[line] += a;
        continue;
      }
      double onward_y = 0.0;
      std::size_t n = 0;
      for (auto k : t.incident[at]) {
        if (k == line) continue;
        onward_y += t.y[k];
        ++n;
      }
      if (n == 0 || onward_y == 0.0) {
        res.deposit[line] += a;
        continue;
      }
      const double keep = retained_fraction(t.y[line], onward_y, n) * a;
      res.deposit[line] += keep;
      const double rest = a - keep;
      for (auto k : t.incident[at]) {
        if (k == line) continue;
        send(next, k, at, rest * t.y[k] / onward_y);
      }
    }
    flight.swap(next);
  }
  for (std::size_t key = 0; key < 2 * m; ++key) {
    res.deposit[key / 2] += flight[key];
    res.folded += std::abs(flight[key]);
  }
  res.rounds = round;
  return res;
}

}  // namespace

double retained_fraction(double y_in, double sum_onward, std::size_t n_onward) {
  const double ny = static_cast<double>(n_onward) * y_in;
  return ny / (ny + sum_onward);
}

InertiaMap distribute_inertia(const PowerCase& c, const InertiaOptions& opt) {
  const Topology t = build_topology(c);
  check_connectivity(c, t);

  // Generators sharing a bus are merged; bus order is the canonical order.
  std::map<int, double> per_bus;
  for (const auto& g : c.generators) per_bus[g.bus] += g.inertia_j;
  std::vector<std::pair<std::size_t, double>> sources;
  for (const auto& [id, j] : per_bus) sources.emplace_back(c.bus_index(id), j);

  std::vector<Result> parts(sources.size());
  const long ns = static_cast<long>(sources.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (long s = 0; s < ns; ++s) {
    const auto& [bus, j] = sources[static_cast<std::size_t>(s)];
    parts[static_cast<std::size_t>(s)] = spread_from(t, bus, j, opt);
  }

  InertiaMap map;
  map.j_total.assign(c.lines.size(), 0.0);
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < p.deposit.size(); ++k) map.j_total[k] += p.deposit[k];
    map.max_rounds_used = std::max(map.max_rounds_used, p.rounds);
    map.folded_residue += p.folded;
  }
  map.j_per_mile.resize(c.lines.size());
  for (std::size_t k = 0; k < c.lines.size(); ++k) {
    map.j_per_mile[k] = map.j_total[k] / c.lines[k].length_miles;
  }
  return map;
}

double line_density(const InertiaMap& map, std::size_t line) {
  if (line >= map.j_per_mile.size()) {
    throw ReferenceError("line index " + std::to_string(line) + " is not in the inertia map");
  }
  return map.j_per_mile[line];
}

std::string inertia_csv(const PowerCase& c, const InertiaMap& map) {
  std::ostringstream os;
  os << "line_id,j_total,j_per_mile\n";
  char buf[128];
  for (std::size_t k = 0; k < c.lines.size(); ++k) {
    std::snprintf(buf, sizeof buf, ",%.12e,%.12e\n", map.j_total[k], map.j_per_mile[k]);
    os << c.line_label(k) << buf;
  }
  return os.str();
}

}  // namespace emw
