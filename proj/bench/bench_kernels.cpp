#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "hodge/generators.hpp"
#include "hodge/linop.hpp"
#include "hodge/solver.hpp"

using namespace hodge;

namespace {

// ∂2 of grid_ball(k); cached across benchmarks.
const kernels::Csr& boundary2(int k) {
  static std::map<int, kernels::Csr> cache;
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  auto cx = EmbeddedComplex::build(gen::grid_ball(k, {gen::KKind::Full}));
  Scope x = Scope::full(cx);
  return cache.emplace(k, x.boundary(2).matrix()).first->second;
}

template <auto Spmv>
void BM_spmv(benchmark::State& st) {
  const auto& a = boundary2(static_cast<int>(st.range(0)));
  Vecd x = random_vector(a.cols, 1), y(a.rows);
  for (auto _ : st) {
    Spmv(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  st.counters["nnz"] = static_cast<double>(a.nnz());
  st.SetItemsProcessed(st.iterations() * static_cast<long long>(a.nnz()));
}

template <auto Dot>
void BM_dot(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Vecd x = random_vector(n, 1), y = random_vector(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(Dot(x, y));
  st.SetItemsProcessed(st.iterations() * static_cast<long long>(n));
}

template <auto Axpy>
void BM_axpy(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  Vecd x = random_vector(n, 1), y = random_vector(n, 2);
  for (auto _ : st) {
    Axpy(1e-9, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long long>(n));
}

// End to end solve with the kernels capped at one thread or left free.
void BM_laplacian_solve(benchmark::State& st) {
  const int threads = static_cast<int>(st.range(1));
  static std::map<int, std::unique_ptr<SolverContext>> ctx;
  const int k = static_cast<int>(st.range(0));
  if (!ctx.count(k))
    ctx[k] = SolverContext::prepare(EmbeddedComplex::build(gen::grid_ball(k, {gen::KKind::Tunnels, 1})), {});
  const auto& s = *ctx[k];
  Vecd b = random_vector(s.k().count(1), 3);
  const int saved = kernels::max_threads();
  kernels::set_max_threads(threads == 0 ? saved : threads);
  for (auto _ : st) benchmark::DoNotOptimize(s.laplacian_solve(0.05, b));
  kernels::set_max_threads(saved);
  st.counters["n1"] = static_cast<double>(s.k().count(1));
}

}  // namespace

BENCHMARK(BM_spmv<kernels::serial::spmv>)->Name("spmv/serial")->Arg(6)->Arg(12);
BENCHMARK(BM_spmv<kernels::omp::spmv>)->Name("spmv/omp")->Arg(6)->Arg(12);
BENCHMARK(BM_dot<kernels::serial::dot>)->Name("dot/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_dot<kernels::omp::dot>)->Name("dot/omp")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_axpy<kernels::serial::axpy>)->Name("axpy/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_axpy<kernels::omp::axpy>)->Name("axpy/omp")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_laplacian_solve)->Args({8, 1})->Args({8, 0})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
