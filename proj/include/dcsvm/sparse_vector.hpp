#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dcsvm {

struct Feature {
  std::uint32_t index;
  double value;

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Immutable sparse sample. Entries are kept sorted by strictly increasing
/// index and never store an exact zero; the constructor enforces both.
class SparseVector {
 public:
  SparseVector() = default;

  /// Throws std::invalid_argument on unsorted/duplicate indices or a stored 0.
  explicit SparseVector(std::vector<Feature> entries);

  /// Drops zeros; index i of `dense` becomes feature i.
  static SparseVector from_dense(std::span<const double> dense);

  std::span<const Feature> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Largest stored index + 1 (0 for the empty vector).
  std::size_t dimension() const {
    return entries_.empty() ? 0 : entries_.back().index + 1;
  }

  /// Content hash, used to short-circuit identity comparisons.
  std::uint64_t hash() const { return hash_; }

  std::vector<double> to_dense(std::size_t dim) const;

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.hash_ == b.hash_ && a.entries_ == b.entries_;
  }

 private:
  void rehash();

  std::vector<Feature> entries_;
  std::uint64_t hash_ = 0;
};

}  // namespace dcsvm
