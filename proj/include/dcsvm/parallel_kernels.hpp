#pragma once

// Data-parallel inner loops. Every routine exists twice with the same
// signature: `serial::` is the reference, `omp::` splits the loop across
// OpenMP threads. Both write each output slot from exactly one iteration and
// never reduce across threads, so their results are bit-identical.

#include <cstddef>
#include <span>

#include "dcsvm/kernel.hpp"

namespace dcsvm::kernels {

/// Below this many kernel evaluations the omp variants run serially.
inline constexpr std::size_t kParallelThreshold = 4096;

namespace serial {

/// out[i] = k(vectors[i], x)
void kernel_row(const KernelSpec& spec, std::span<const SparseVector* const> vectors,
                const SparseVector& x, std::span<double> out);

/// Row-major m x m Gram matrix.
void kernel_matrix(const KernelSpec& spec, std::span<const SparseVector* const> vectors,
                   std::span<double> out);

/// out[k] = |x - centroid_k|^2 over a row-major (count x dim) centroid table.
/// Features of x with index >= dim are ignored.
void centroid_distances(std::span<const double> centroids, std::size_t dim,
                        const SparseVector& x, std::span<double> out);

}  // namespace serial

namespace omp {

void kernel_row(const KernelSpec& spec, std::span<const SparseVector* const> vectors,
                const SparseVector& x, std::span<double> out);

void kernel_matrix(const KernelSpec& spec, std::span<const SparseVector* const> vectors,
                   std::span<double> out);

void centroid_distances(std::span<const double> centroids, std::size_t dim,
                        const SparseVector& x, std::span<double> out);

}  // namespace omp

/// First index of the minimum; ties go to the lowest index.
std::size_t argmin(std::span<const double> values);

/// |x - centroid|^2 for a single dense centroid.
double centroid_distance(std::span<const double> centroid, const SparseVector& x);

}  // namespace dcsvm::kernels
