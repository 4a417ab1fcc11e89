#include <benchmark/benchmark.h>

#include <random>

#include "cfw/active_set.hpp"
#include "cfw/frank_wolfe.hpp"
#include "cfw/lmo.hpp"
#include "cfw/problems.hpp"
#include "cfw/quadratic_correction.hpp"

namespace {

void BM_Hungarian(benchmark::State& state) {
  const auto n = static_cast<cfw::Index>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  cfw::Matrix cost(n, n);
  for (cfw::Index i = 0; i < n; ++i)
    for (cfw::Index j = 0; j < n; ++j) cost(i, j) = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(cfw::hungarian_assignment(cost));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oNCubed);

void BM_KSparseLmo(benchmark::State& state) {
  const auto n = static_cast<cfw::Index>(state.range(0));
  std::mt19937_64 rng(3);
  const cfw::Vector d = cfw::standard_normal_vector(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(cfw::lmo_ksparse(d, 20, 1.0));
}
BENCHMARK(BM_KSparseLmo)->Range(64, 1 << 14);

// Full runs to a fixed gap: iterations reported as counters.
void run_ksparse(benchmark::State& state, bool quadratic) {
  auto p = cfw::gen_ksparse_regression(50, 500, 5, 1.0, 11);
  cfw::CfwParams params;
  params.max_iterations = 5000;
  params.fw_gap_tolerance = 1e-8;
  const cfw::Atom x0 = p.lmo->minimize(p.objective->linear());
  std::size_t iterations = 0;
  for (auto _ : state) {
    std::unique_ptr<cfw::Corrector> corrector =
        quadratic ? cfw::hybrid_corrector({1, 0, 2}, cfw::QcVariant::Mnp)
                  : std::unique_ptr<cfw::Corrector>(std::make_unique<cfw::PairwiseCorrector>());
    auto r = cfw::cfw_run(*p.objective, *p.lmo, *corrector, x0, params);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.primal);
  }
  state.counters["iterations"] = static_cast<double>(iterations);
}

void BM_KSparsePairwise(benchmark::State& state) { run_ksparse(state, false); }
void BM_KSparseQcMnp(benchmark::State& state) { run_ksparse(state, true); }
BENCHMARK(BM_KSparsePairwise)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KSparseQcMnp)->Unit(benchmark::kMillisecond);

void BM_QcMnpStep(benchmark::State& state) {
  const auto k = static_cast<cfw::Index>(state.range(0));
  auto p = cfw::gen_simplex_quadratic(64, 5, 0.1);
  std::vector<cfw::Atom> atoms;
  for (cfw::Index i = 0; i < k; ++i) atoms.push_back(cfw::Atom::sparse(64, {{i, 1.0}}));
  const cfw::Vector weights = cfw::Vector::Constant(k, 1.0 / static_cast<double>(k));
  for (auto _ : state) {
    state.PauseTiming();
    cfw::ActiveSet set(atoms, weights);
    state.ResumeTiming();
    benchmark::DoNotOptimize(cfw::qc_mnp_step(set, *p.objective));
  }
}
BENCHMARK(BM_QcMnpStep)->RangeMultiplier(2)->Range(4, 64);

}  // namespace

BENCHMARK_MAIN();
