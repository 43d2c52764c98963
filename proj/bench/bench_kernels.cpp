#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "emw/inertia.hpp"
#include "emw/kernels.hpp"
#include "support/oracles.hpp"

namespace {

struct KernelData {
  std::vector<double> lam, chi, a, c, lam_out, chi_out;
  explicit KernelData(std::size_t n) : lam(n), chi(n), a(n), c(n), lam_out(n), chi_out(n) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(n);
      lam[i] = std::sin(6.0 * x);
      chi[i] = std::cos(4.0 * x);
      a[i] = 1.0 + 0.5 * x;
      c[i] = 2.0 - x;
    }
  }
  emw::EmwKernelArgs args() {
    return {lam.size(), lam.data(), chi.data(), a.data(), c.data(), 0.4, lam_out.data(), chi_out.data()};
  }
};

template <void (*Kernel)(const emw::EmwKernelArgs&)>
void BM_Richtmyer(benchmark::State& state) {
  KernelData d(static_cast<std::size_t>(state.range(0)));
  const auto k = d.args();
  for (auto _ : state) {
    Kernel(k);
    benchmark::DoNotOptimize(d.chi_out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_InertiaCase39(benchmark::State& state) {
  const emw::PowerCase c = emw::testing::case39();
  emw::InertiaOptions opt;
  opt.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(emw::distribute_inertia(c, opt));
}

void BM_InertiaRandom(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const emw::PowerCase c = emw::testing::random_case(rng, 400, 300, 40);
  emw::InertiaOptions opt;
  opt.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(emw::distribute_inertia(c, opt));
}

}  // namespace

BENCHMARK_TEMPLATE(BM_Richtmyer, emw::serial::richtmyer_emw)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK_TEMPLATE(BM_Richtmyer, emw::omp::richtmyer_emw)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_InertiaCase39)->Arg(0)->Arg(1);
BENCHMARK(BM_InertiaRandom)->Arg(0)->Arg(1);
BENCHMARK_MAIN();
