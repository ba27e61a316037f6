#include "dcsvm/parallel_kernels.hpp"

#include <omp.h>

#include <cassert>

namespace dcsvm::kernels {

double centroid_distance(std::span<const double> centroid, const SparseVector& x) {
  const auto entries = x.entries();
  std::size_t e = 0;
  double sum = 0.0;
  for (std::size_t j = 0; j < centroid.size(); ++j) {
    double d = centroid[j];
    if (e < entries.size() && entries[e].index == j) d -= entries[e++].value;
    sum += d * d;
  }
  return sum;
}

std::size_t argmin(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

namespace serial {

void kernel_row(const KernelSpec& spec, std::span<const SparseVector* const> vectors,
                const SparseVector& x, std::span<double> out) {
  assert(out.size() >= vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) out[i] = eval(spec, *vectors[i], x);
}

void kernel_matrix(const KernelSpec& spec, std::span<const SparseVector* const> vectors,
                   std::span<double> out) {
  const std::size_t m = vectors.size();
  assert(out.size() >= m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double k = eval(spec, *vectors[i], *vectors[j]);
      out[i * m + j] = k;
      out[j * m + i] = k;
    }
  }
}

void centroid_distances(std::span<const double> centroids, std::size_t dim,
                        const SparseVector& x, std::span<double> out) {
  const std::size_t count = dim == 0 ? out.size() : centroids.size() / dim;
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = centroid_distance(centroids.subspan(k * dim, dim), x);
  }
}

}  // namespace serial

namespace omp {

void kernel_row(const KernelSpec& spec, std::span<const SparseVector* const> vectors,
                const SparseVector& x, std::span<double> out) {
  assert(out.size() >= vectors.size());
  const auto n = static_cast<std::ptrdiff_t>(vectors.size());
  const std::size_t work = vectors.size() * (x.nnz() + 1);
#pragma omp parallel for schedule(static) if (work >= kParallelThreshold * 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = eval(spec, *vectors[i], x);
}

void kernel_matrix(const KernelSpec& spec, std::span<const SparseVector* const> vectors,
                   std::span<double> out) {
  const std::size_t m = vectors.size();
  assert(out.size() >= m * m);
  const auto rows = static_cast<std::ptrdiff_t>(m);
  // Upper triangle only; rows shrink, so hand them out dynamically.
#pragma omp parallel for schedule(dynamic, 8) if (m * m >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    for (std::size_t j = static_cast<std::size_t>(i); j < m; ++j) {
      const double k = eval(spec, *vectors[i], *vectors[j]);
      out[i * m + j] = k;
      out[j * m + i] = k;
    }
  }
}

void centroid_distances(std::span<const double> centroids, std::size_t dim,
                        const SparseVector& x, std::span<double> out) {
  const std::size_t count = dim == 0 ? out.size() : centroids.size() / dim;
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) if (count * dim >= kParallelThreshold * 16)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out[k] = centroid_distance(centroids.subspan(k * dim, dim), x);
  }
}

}  // namespace omp

}  // namespace dcsvm::kernels
