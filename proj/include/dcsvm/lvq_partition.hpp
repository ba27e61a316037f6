#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dcsvm/sparse_vector.hpp"

namespace dcsvm {

/// Online LVQ partition of the input space: up to `max_clusters` dense
/// centroids of a fixed dimension. New samples recruit centroids until the
/// partition is full; after that the nearest centroid drifts toward each
/// sample by mu <- mu + rate * (x - mu). Labels are never consulted.
class LvqPartition {
 public:
  LvqPartition(std::size_t max_clusters, std::size_t dimension, double rate);

  std::size_t size() const { return count_; }
  std::size_t max_clusters() const { return max_clusters_; }
  std::size_t dimension() const { return dimension_; }
  double rate() const { return rate_; }
  bool full() const { return count_ == max_clusters_; }

  std::span<const double> centroid(std::size_t k) const {
    return std::span<const double>(centroids_).subspan(k * dimension_, dimension_);
  }
  std::span<const double> centroid_table() const {
    return std::span<const double>(centroids_).first(count_ * dimension_);
  }

  /// Adds a centroid at x; throws std::logic_error when full.
  std::size_t recruit(const SparseVector& x);

  /// Nearest centroid by Euclidean distance, lowest index on ties.
  /// Throws std::logic_error when empty.
  std::size_t nearest(const SparseVector& x) const;

  void drift(std::size_t k, const SparseVector& x);

  /// Restores a saved centroid (used by model loading).
  void append_centroid(std::span<const double> centroid);

 private:
  std::size_t max_clusters_;
  std::size_t dimension_;
  double rate_;
  std::size_t count_ = 0;
  std::vector<double> centroids_;
};

}  // namespace dcsvm
