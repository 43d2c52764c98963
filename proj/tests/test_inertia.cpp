#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "emw/error.hpp"
#include "emw/inertia.hpp"
#include "support/oracles.hpp"

using namespace emw;

namespace {

// Lines with r = 0 so that Y = 1/x.
Line make_line(int a, int b, double y, double length = 1.0) {
  Line l;
  l.from_bus = a;
  l.to_bus = b;
  l.x = 1.0 / y;
  l.length_miles = length;
  return l;
}

Generator make_gen(int bus, double j) {
  Generator g;
  g.bus = bus;
  g.h_const = 1;
  g.mva_rating = 1;
  g.inertia_j = j;
  return g;
}

PowerCase base(int n_bus) {
  PowerCase c;
  c.omega0 = 2 * 3.141592653589793 * 60;
  for (int i = 1; i <= n_bus; ++i) c.buses.push_back({i, i == 1 ? BusKind::slack : BusKind::pq, 1.0, 0, 0});
  return c;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double total_gen(const PowerCase& c) {
  double s = 0;
  for (const auto& g : c.generators) s += g.inertia_j;
  return s;
}

}  // namespace

TEST(Abid, ChainExample) {
  PowerCase c = base(3);
  c.lines = {make_line(1, 2, 5), make_line(2, 3, 5)};
  c.generators = {make_gen(1, 10), make_gen(3, 0)};
  const auto m = distribute_inertia(c);
  EXPECT_NEAR(m.j_total[0], 5.0, 1e-12);
  EXPECT_NEAR(m.j_total[1], 5.0, 1e-12);
}

TEST(Abid, SingleLineBetweenGenerators) {
  PowerCase c = base(2);
  c.lines = {make_line(1, 2, 3)};
  c.generators = {make_gen(1, 7)};
  c.generators.push_back(make_gen(2, 0));
  const auto m = distribute_inertia(c);
  EXPECT_NEAR(m.j_total[0], 7.0, 1e-12);
}

TEST(Abid, StarExample) {
  PowerCase c = base(4);
  c.lines = {make_line(1, 2, 2), make_line(2, 3, 1), make_line(2, 4, 1)};
  c.generators = {make_gen(1, 12), make_gen(3, 0), make_gen(4, 0)};
  const auto m = distribute_inertia(c);
  EXPECT_NEAR(m.j_total[0], 8.0, 1e-12);
  EXPECT_NEAR(m.j_total[1], 2.0, 1e-12);
  EXPECT_NEAR(m.j_total[2], 2.0, 1e-12);
}

TEST(Abid, RetainedFractionInOpenUnitInterval) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(1e-3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + k % 5;
    const double f = retained_fraction(u(rng), u(rng), n);
    EXPECT_GT(f, 0.0);
    EXPECT_LT(f, 1.0);
  }
  EXPECT_DOUBLE_EQ(retained_fraction(5, 5, 1), 0.5);
}

TEST(Abid, LineDensity) {
  InertiaMap m;
  m.j_total = {5.0, 0.0};
  m.j_per_mile = {2.5, 0.0};
  EXPECT_DOUBLE_EQ(line_density(m, 0), 2.5);
  EXPECT_DOUBLE_EQ(line_density(m, 1), 0.0);
  EXPECT_THROW(line_density(m, 2), ReferenceError);
}

TEST(Abid, Case39ConservesAndIsPositive) {
  const PowerCase c = emw::testing::case39();
  const auto m = distribute_inertia(c);
  EXPECT_NEAR(sum(m.j_total), total_gen(c), 1e-9 * total_gen(c));
  const auto li = c.line_index("9-39");
  EXPECT_GT(line_density(m, li), 0.0);
  for (double j : m.j_total) EXPECT_GE(j, 0.0);
}

TEST(Abid, SerialAndParallelAgree) {
  const PowerCase c = emw::testing::case39();
  InertiaOptions s;
  s.parallel = false;
  const auto a = distribute_inertia(c, s);
  const auto b = distribute_inertia(c);
  ASSERT_EQ(a.j_total.size(), b.j_total.size());
  for (std::size_t i = 0; i < a.j_total.size(); ++i) EXPECT_NEAR(a.j_total[i], b.j_total[i], 1e-15 * total_gen(c));
}

TEST(AbidProperty, RandomGraphsConserveInertia) {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 11;
    const PowerCase c = emw::testing::random_case(rng, n, k % 5, 1 + k % 4);
    const auto m = distribute_inertia(c);
    const double tot = total_gen(c);
    EXPECT_NEAR(sum(m.j_total), tot, 1e-9 * tot) << "graph " << k;
    for (double j : m.j_total) EXPECT_GE(j, 0.0);
  }
}

TEST(AbidProperty, IndependentOfLineOrder) {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 30; ++k) {
    const PowerCase c = emw::testing::random_case(rng, 3 + k % 9, 3, 2);
    PowerCase p = c;
    std::vector<std::size_t> perm(c.lines.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < perm.size(); ++i) p.lines[i] = c.lines[perm[i]];
    const auto a = distribute_inertia(c);
    const auto b = distribute_inertia(p);
    for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_NEAR(b.j_total[i], a.j_total[perm[i]], 1e-12);
  }
}

TEST(Abid, IslandWithoutGeneratorThrows) {
  PowerCase c = base(4);
  c.lines = {make_line(1, 2, 1), make_line(3, 4, 1)};
  c.generators = {make_gen(1, 1)};
  EXPECT_THROW(distribute_inertia(c), DomainError);
}

TEST(Abid, CsvHeader) {
  const PowerCase c = emw::testing::case39();
  const auto csv = inertia_csv(c, distribute_inertia(c));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "line_id,j_total,j_per_mile");
}
