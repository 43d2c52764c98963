#include "emw/graph_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include <json.hpp>

#include "emw/error.hpp"

namespace emw {

double line_emw_velocity(const Line& line, double j_h, double v_pu, double omega0) {
  if (!(j_h > 0)) throw DomainError("EMW velocity needs j_h > 0");
  if (!(line.x > 0)) throw DomainError("EMW velocity needs x > 0");
  if (!(line.length_miles > 0)) throw DomainError("EMW velocity needs a positive length");
  if (!(omega0 > 0)) throw DomainError("EMW velocity needs omega0 > 0");
  const double b = line.length_miles / line.x;
  return std::sqrt(v_pu * v_pu * b / (j_h * omega0));
}

EmwPath shortest_emw_path(const PowerCase& c, const InertiaMap& map, const PowerFlowSolution& sol,
                          int src, int dst) {
  const std::size_t s = c.bus_index(src);
  const std::size_t d = c.bus_index(dst);
  const std::size_t n = c.buses.size();

  struct Edge {
    std::size_t to;
    std::size_t line;
    double time;
    double velocity;
  };
  std::vector<std::vector<Edge>> adj(n);
  for (std::size_t k = 0; k < c.lines.size(); ++k) {
    const auto& l = c.lines[k];
    if (!l.in_service() || !(map.j_per_mile[k] > 0)) continue;
    const double v = 0.5 * (sol.v_mag[sol.bus_index(l.from_bus)] + sol.v_mag[sol.bus_index(l.to_bus)]);
    const double vel = line_emw_velocity(l, map.j_per_mile[k], v, c.omega0);
    const auto a = c.bus_index(l.from_bus), b = c.bus_index(l.to_bus);
    adj[a].push_back({b, k, l.length_miles / vel, vel});
    adj[b].push_back({a, k, l.length_miles / vel, vel});
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<std::size_t> prev_bus(n, n), prev_edge(n, 0);
  std::vector<char> done(n, 0);
  // (time, bus id, bus index): equal times pop the smaller bus id first.
  using Item = std::tuple<double, int, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[s] = 0.0;
  heap.emplace(0.0, c.buses[s].id, s);
  while (!heap.empty()) {
    auto [t, id, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u == d) break;
    for (std::size_t e = 0; e < adj[u].size(); ++e) {
      const auto& edge = adj[u][e];
      const double alt = t + edge.time;
      const bool better = alt < dist[edge.to];
      const bool tie = alt == dist[edge.to] && prev_bus[edge.to] < n &&
                       c.buses[u].id < c.buses[prev_bus[edge.to]].id;
      if (!done[edge.to] && (better || tie)) {
        dist[edge.to] = alt;
        prev_bus[edge.to] = u;
        prev_edge[edge.to] = e;
        heap.emplace(alt, c.buses[edge.to].id, edge.to);
      }
    }
  }
  if (!std::isfinite(dist[d])) {
    throw DomainError("bus " + std::to_string(dst) + " is unreachable from bus " + std::to_string(src));
  }

  EmwPath p;
  std::vector<std::size_t> chain{d};
  while (chain.back() != s) chain.push_back(prev_bus[chain.back()]);
  std::reverse(chain.begin(), chain.end());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    p.buses.push_back(c.buses[chain[i]].id);
    if (i == 0) continue;
    const auto& edge = adj[chain[i - 1]][prev_edge[chain[i]]];
    p.lines.push_back(edge.line);
    p.velocities.push_back(edge.velocity);
    p.lengths.push_back(c.lines[edge.line].length_miles);
    p.length_miles += c.lines[edge.line].length_miles;
  }
  p.travel_time_s = path_travel_time(p);
  return p;
}

double path_travel_time(const EmwPath& p) {
  double t = 0.0;
  for (std::size_t i = 0; i < p.lines.size(); ++i) t += p.lengths[i] / p.velocities[i];
  return t;
}

std::string path_json(const PowerCase& c, const EmwPath& p) {
  nlohmann::ordered_json j;
  j["buses"] = p.buses;
  j["lines"] = nlohmann::ordered_json::array();
  for (auto k : p.lines) j["lines"].push_back(c.line_label(k));
  j["velocities"] = p.velocities;
  j["lengths"] = p.lengths;
  j["travel_time_s"] = p.travel_time_s;
  return j.dump(2) + "\n";
}

}  // namespace emw
