// Serial reference vs OpenMP kernels on random sparse vectors.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dcsvm/parallel_kernels.hpp"

using namespace dcsvm;

namespace {

constexpr std::size_t kDim = 256;

std::vector<SparseVector> random_vectors(std::size_t count, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SparseVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> dense(kDim, 0.0);
    for (auto& v : dense) v = u(rng) < density ? u(rng) : 0.0;
    out.push_back(SparseVector::from_dense(dense));
  }
  return out;
}

std::vector<const SparseVector*> pointers(const std::vector<SparseVector>& vs) {
  std::vector<const SparseVector*> p;
  for (const auto& v : vs) p.push_back(&v);
  return p;
}

template <auto Fn>
void BM_kernel_row(benchmark::State& state) {
  const auto vs = random_vectors(static_cast<std::size_t>(state.range(0)), 0.3, 1);
  const auto ptrs = pointers(vs);
  const auto x = random_vectors(1, 0.3, 2)[0];
  const auto spec = KernelSpec::rbf(0.05);
  std::vector<double> out(ptrs.size());
  for (auto _ : state) {
    Fn(spec, ptrs, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Fn>
void BM_kernel_matrix(benchmark::State& state) {
  const auto vs = random_vectors(static_cast<std::size_t>(state.range(0)), 0.3, 3);
  const auto ptrs = pointers(vs);
  const auto spec = KernelSpec::rbf(0.05);
  std::vector<double> out(ptrs.size() * ptrs.size());
  for (auto _ : state) {
    Fn(spec, ptrs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <auto Fn>
void BM_centroid_distances(benchmark::State& state) {
  const auto count = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> centroids(count * kDim);
  for (auto& c : centroids) c = u(rng);
  const auto x = random_vectors(1, 0.3, 5)[0];
  std::vector<double> out(count);
  for (auto _ : state) {
    Fn(centroids, kDim, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_kernel_row<kernels::serial::kernel_row>)->Name("kernel_row/serial")->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK(BM_kernel_row<kernels::omp::kernel_row>)->Name("kernel_row/omp")->RangeMultiplier(8)->Range(64, 32768);
BENCHMARK(BM_kernel_matrix<kernels::serial::kernel_matrix>)->Name("kernel_matrix/serial")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_kernel_matrix<kernels::omp::kernel_matrix>)->Name("kernel_matrix/omp")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_centroid_distances<kernels::serial::centroid_distances>)->Name("centroid_distances/serial")->Arg(256)->Arg(1024)->Arg(16384);
BENCHMARK(BM_centroid_distances<kernels::omp::centroid_distances>)->Name("centroid_distances/omp")->Arg(256)->Arg(1024)->Arg(16384);

BENCHMARK_MAIN();
