// Kernel timings: dense products, factorizations, the per-column solver,
// and the two sketches at the shapes the pipeline actually uses.

#include <benchmark/benchmark.h>

#include <cstddef>

#include "l0ssc/cluster.hpp"
#include "l0ssc/numkern.hpp"
#include "l0ssc/project.hpp"
#include "l0ssc/rng.hpp"
#include "l0ssc/solver.hpp"

namespace {

using namespace l0ssc;

Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 1, 0);
  Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
  return m;
}

void BM_multiply(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const Matrix a = gaussian(n, n, 1);
  const Matrix b = gaussian(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(a, b));
}
BENCHMARK(BM_multiply)->Arg(64)->Arg(128)->Arg(256);

void BM_qr(benchmark::State& state) {
  const Matrix a = gaussian(std::size_t(state.range(0)), std::size_t(state.range(1)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(qr_decompose(a));
}
BENCHMARK(BM_qr)->Args({256, 64})->Args({512, 64});

void BM_sym_eigen(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const Matrix g = multiply_at_b(gaussian(2 * n, n, 4), gaussian(2 * n, n, 4));
  for (auto _ : state) benchmark::DoNotOptimize(sym_eigen(g));
}
BENCHMARK(BM_sym_eigen)->Arg(32)->Arg(64)->Arg(128);

void BM_singular_values(benchmark::State& state) {
  const Matrix a = gaussian(64, 100, 5);
  for (auto _ : state) benchmark::DoNotOptimize(singular_values(a));
}
BENCHMARK(BM_singular_values);

void BM_pgd_point(benchmark::State& state) {
  const Matrix x = normalize_columns(gaussian(std::size_t(state.range(0)), 128, 6));
  SolverOptions opts;
  opts.lambda = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(pgd_solve_point(x, 0, opts));
}
BENCHMARK(BM_pgd_point)->Arg(64)->Arg(512);

void BM_solve_all(benchmark::State& state) {
  const Matrix x = normalize_columns(gaussian(32, 64, 7));
  SolverOptions opts;
  opts.lambda = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(solve_all(x, opts));
}
BENCHMARK(BM_solve_all);

// Sketch application at d = 512, n = 300, p = 64: the dense range-finder map
// costs O(pdn), the count sketch O(dn).
void BM_apply_lowrank(benchmark::State& state) {
  const Matrix x = normalize_columns(gaussian(512, 300, 8));
  const Projector proj = lowrank_projector(x, 64, 8);
  for (auto _ : state) benchmark::DoNotOptimize(apply(proj, x));
}
BENCHMARK(BM_apply_lowrank);

void BM_apply_countsketch(benchmark::State& state) {
  const Matrix x = normalize_columns(gaussian(512, 300, 9));
  const Projector proj = countsketch_projector(512, 64, 9);
  for (auto _ : state) benchmark::DoNotOptimize(apply(proj, x));
}
BENCHMARK(BM_apply_countsketch);

void BM_spectral_cluster(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  SimilarityMatrix w{Matrix(n, n)};
  Rng rng = Rng::stream(10, 1, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) w.w(i, j) = w.w(j, i) = rng.uniform01();
  for (auto _ : state) benchmark::DoNotOptimize(spectral_cluster(w, 3, 0));
}
BENCHMARK(BM_spectral_cluster)->Arg(60)->Arg(120);

}  // namespace

BENCHMARK_MAIN();
