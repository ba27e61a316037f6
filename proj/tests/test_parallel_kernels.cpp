#include <omp.h>

#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "dcsvm/parallel_kernels.hpp"
#include "support/test_util.hpp"

using namespace dcsvm;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct Pool {
  std::vector<SparseVector> storage;
  std::vector<const SparseVector*> ptrs;
};

Pool make_pool(std::size_t count, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Pool p;
  p.storage.reserve(count);
  for (std::size_t i = 0; i < count; ++i) p.storage.push_back(testutil::random_sparse(rng, dim, 0.3));
  for (const auto& v : p.storage) p.ptrs.push_back(&v);
  return p;
}

}  // namespace

TEST_CASE("serial and omp kernel rows agree bit for bit") {
  omp_set_num_threads(4);
  for (std::size_t count : {3u, 200u, 3000u}) {
    const auto pool = make_pool(count, 40, count);
    std::mt19937_64 rng(99);
    const auto x = testutil::random_sparse(rng, 40, 0.5);
    for (const auto& spec : {KernelSpec::rbf(0.1), KernelSpec::linear(), KernelSpec::polynomial(0.5, 2, 1.0)}) {
      std::vector<double> a(count), b(count);
      kernels::serial::kernel_row(spec, pool.ptrs, x, a);
      kernels::omp::kernel_row(spec, pool.ptrs, x, b);
      CHECK(same_bits(a, b));
    }
  }
}

TEST_CASE("serial and omp Gram matrices agree bit for bit and are symmetric") {
  omp_set_num_threads(4);
  for (std::size_t m : {1u, 17u, 150u}) {
    const auto pool = make_pool(m, 25, 1000 + m);
    std::vector<double> a(m * m), b(m * m);
    kernels::serial::kernel_matrix(KernelSpec::rbf(0.2), pool.ptrs, a);
    kernels::omp::kernel_matrix(KernelSpec::rbf(0.2), pool.ptrs, b);
    CHECK(same_bits(a, b));
    bool symmetric = true;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) symmetric = symmetric && a[i * m + j] == a[j * m + i];
    }
    CHECK(symmetric);
    for (std::size_t i = 0; i < m; ++i) CHECK(a[i * m + i] == 1.0);
  }
}

TEST_CASE("centroid distances agree and ignore features past the centroid dimension") {
  omp_set_num_threads(4);
  const std::size_t dim = 64;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t count : {1u, 8u, 2048u}) {
    std::vector<double> table(count * dim);
    for (auto& v : table) v = u(rng);
    const auto x = testutil::random_sparse(rng, dim + 10, 0.4);
    std::vector<double> a(count), b(count);
    kernels::serial::centroid_distances(table, dim, x, a);
    kernels::omp::centroid_distances(table, dim, x, b);
    CHECK(same_bits(a, b));

    const auto dense = x.to_dense(dim);
    for (std::size_t k = 0; k < count; k += 97) {
      double d = 0.0;
      for (std::size_t j = 0; j < dim; ++j) d += (table[k * dim + j] - dense[j]) * (table[k * dim + j] - dense[j]);
      CHECK(a[k] == doctest::Approx(d).epsilon(1e-12));
    }
  }
}

TEST_CASE("argmin prefers the lowest index") {
  const std::vector<double> v{3.0, 1.0, 1.0, 2.0};
  CHECK(kernels::argmin(v) == 1);
  const std::vector<double> w{0.0, 0.0};
  CHECK(kernels::argmin(w) == 0);
}
