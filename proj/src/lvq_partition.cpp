#include "dcsvm/lvq_partition.hpp"

#include <stdexcept>

#include "dcsvm/parallel_kernels.hpp"

namespace dcsvm {

LvqPartition::LvqPartition(std::size_t max_clusters, std::size_t dimension, double rate)
    : max_clusters_(max_clusters), dimension_(dimension), rate_(rate) {
  if (max_clusters == 0) throw std::invalid_argument("cluster count K must be >= 1");
  if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("LVQ rate must lie in (0,1)");
}

std::size_t LvqPartition::recruit(const SparseVector& x) {
  if (full()) throw std::logic_error("LVQ partition is full");
  centroids_.resize((count_ + 1) * dimension_, 0.0);
  double* mu = centroids_.data() + count_ * dimension_;
  for (const auto& f : x.entries()) {
    if (f.index < dimension_) mu[f.index] = f.value;
  }
  return count_++;
}

void LvqPartition::append_centroid(std::span<const double> centroid) {
  if (full()) throw std::logic_error("LVQ partition is full");
  if (centroid.size() != dimension_) throw std::invalid_argument("centroid dimension mismatch");
  centroids_.insert(centroids_.end(), centroid.begin(), centroid.end());
  ++count_;
}

std::size_t LvqPartition::nearest(const SparseVector& x) const {
  if (count_ == 0) throw std::logic_error("LVQ partition has no centroids");
  thread_local std::vector<double> dist;
  dist.resize(count_);
  kernels::omp::centroid_distances(centroid_table(), dimension_, x, dist);
  return kernels::argmin(dist);
}

void LvqPartition::drift(std::size_t k, const SparseVector& x) {
  double* mu = centroids_.data() + k * dimension_;
  const auto entries = x.entries();
  std::size_t e = 0;
  for (std::size_t j = 0; j < dimension_; ++j) {
    double target = 0.0;
    if (e < entries.size() && entries[e].index == j) target = entries[e++].value;
    mu[j] += rate_ * (target - mu[j]);
  }
}

}  // namespace dcsvm
