// Per-iteration cost of the EM loop and of the similarity precomputation at
// a few graph sizes. Run: ./benchmarks/netclust_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "netclust/em.hpp"
#include "netclust/similarity.hpp"
#include "netclust/synthetic.hpp"

using namespace netclust;

namespace {

SyntheticData make_data(int n) {
  SyntheticSpec spec;
  spec.n_vertices = n;
  spec.k_clusters = 4;
  spec.m_features = 128;
  // keep the average degree flat across sizes
  spec.edge_scale = 0.5 * 200.0 / n;
  spec.seed = 42;
  return generate_network(spec);
}

void BM_em_iterations(benchmark::State& state) {
  const auto data = make_data(static_cast<int>(state.range(0)));
  const auto sims = compute_similarities(data.net);
  EMConfig cfg;
  cfg.k_clusters = 4;
  cfg.seed = 1;
  cfg.tol = 0.0;
  cfg.relative_tol = false;
  cfg.max_iters = 10;
  for (auto _ : state) {
    auto result = fit(data.net, sims, cfg);
    benchmark::DoNotOptimize(result.final_loglik);
  }
  state.counters["edges"] = static_cast<double>(data.net.edge_count());
  state.counters["iters_per_fit"] = cfg.max_iters;
}
BENCHMARK(BM_em_iterations)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)
    ->Unit(benchmark::kMillisecond);

void BM_similarities(benchmark::State& state) {
  const auto data = make_data(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto sims = compute_similarities(data.net);
    benchmark::DoNotOptimize(sims.z.data());
  }
  state.counters["pairs"] = static_cast<double>(data.net.pair_count());
}
BENCHMARK(BM_similarities)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
