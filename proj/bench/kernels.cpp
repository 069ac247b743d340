// Serial reference kernels against the OpenMP / batched ones.
//   kernels_bench [--benchmark_filter=...]
#include <benchmark/benchmark.h>

#include <omp.h>

#include "graphfluct/dynamics.hpp"
#include "graphfluct/rng.hpp"
#include "graphfluct/rowsum.hpp"

namespace {

using namespace gf;

std::vector<double> phases(size_t n) {
  Rng rng(1, Stream::Init);
  std::vector<double> x(n);
  for (double& v : x) v = kTwoPi * rng.uniform();
  return x;
}

void BM_drift_reference(benchmark::State& st) {
  const size_t n = static_cast<size_t>(st.range(0));
  const Graph g = gen_erdos_renyi(n, 0.5, 1, false);
  const KernelSpec k = kuramoto_kernel(2.0);
  const auto x = phases(n);
  std::vector<double> out;
  for (auto _ : st) {
    drift_reference(g, k, Renorm::Expected, x, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void drift_engine(benchmark::State& st, bool parallel) {
  const size_t n = static_cast<size_t>(st.range(0));
  const Graph g = gen_erdos_renyi(n, 0.5, 1, false);
  const KernelSpec k = kuramoto_kernel(2.0);
  const auto x = phases(n);
  DriftEngine eng(g, k, Renorm::Expected, parallel);
  std::vector<double> out;
  for (auto _ : st) {
    eng(x, out);
    benchmark::DoNotOptimize(out.data());
  }
}
void BM_drift_engine_serial(benchmark::State& st) { drift_engine(st, false); }
void BM_drift_engine_omp(benchmark::State& st) { drift_engine(st, true); }

void row_sums(benchmark::State& st, bool parallel) {
  const size_t n = static_cast<size_t>(st.range(0));
  const Graph g = gen_erdos_renyi(n, 0.5, 1, false);
  const size_t ld = padded_len(g);
  const int cols = 2;
  std::vector<double> x(ld * cols, 0.0), y(n * cols);
  const auto p = phases(n);
  for (size_t j = 0; j < n; ++j) {
    x[j] = std::cos(p[j]);
    x[ld + j] = std::sin(p[j]);
  }
  for (auto _ : st) {
    if (parallel) row_sums_omp(g, x.data(), ld, cols, y.data(), n);
    else row_sums_serial(g, x.data(), ld, cols, y.data(), n);
    benchmark::DoNotOptimize(y.data());
  }
}
void BM_row_sums_serial(benchmark::State& st) { row_sums(st, false); }
void BM_row_sums_omp(benchmark::State& st) { row_sums(st, true); }

// 32 replicas on one graph for ten steps: replica loop against the dense batched product.
constexpr int kReplicas = 32;
constexpr double kDt = 1e-2, kT = 0.1;

void BM_replicas_loop(benchmark::State& st) {
  const size_t n = static_cast<size_t>(st.range(0));
  const Graph g = gen_erdos_renyi(n, 0.5, 1, false);
  const KernelSpec k = kuramoto_kernel(2.0);
  ParticleState init;
  init.phases = phases(n);
  for (auto _ : st) {
    for (int r = 0; r < kReplicas; ++r) {
      SimConfig c;
      c.dt = kDt;
      c.t_final = kT;
      c.replica = static_cast<uint64_t>(r);
      c.parallel = false;
      c.keep_states = true;
      benchmark::DoNotOptimize(simulate(g, init, k, c).states.data());
    }
  }
  st.SetItemsProcessed(st.iterations() * kReplicas);
}

void BM_replicas_batch(benchmark::State& st) {
  const size_t n = static_cast<size_t>(st.range(0));
  const Graph g = gen_erdos_renyi(n, 0.5, 1, false);
  const KernelSpec k = kuramoto_kernel(2.0);
  ParticleState init;
  init.phases = phases(n);
  const std::vector<ParticleState> inits(kReplicas, init);
  std::vector<uint64_t> ids(kReplicas);
  for (int r = 0; r < kReplicas; ++r) ids[static_cast<size_t>(r)] = static_cast<uint64_t>(r);
  SimConfig c;
  c.dt = kDt;
  c.t_final = kT;
  for (auto _ : st) benchmark::DoNotOptimize(simulate_batch(g, inits, ids, k, c).data());
  st.SetItemsProcessed(st.iterations() * kReplicas);
}

}  // namespace

BENCHMARK(BM_drift_reference)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_drift_engine_serial)->Arg(250)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_drift_engine_omp)->Arg(250)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_row_sums_serial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_row_sums_omp)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_replicas_loop)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_replicas_batch)->Arg(500)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::AddCustomContext("omp_threads", std::to_string(omp_get_max_threads()));
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
