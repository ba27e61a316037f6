#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dcsvm/kernel.hpp"
#include "dcsvm/sparse_vector.hpp"

namespace dcsvm {

using VectorPtr = std::shared_ptr<const SparseVector>;

/// Raised when k(x,x) <= 0, which leaves the coordinate step undefined
/// (e.g. the zero vector under the linear kernel).
class DegenerateSample : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Throws std::invalid_argument unless y is -1 or +1.
void check_label(int y);

/// One retained sample. The weight is stored as the box variable
/// beta = y * alpha in [0, C]; alpha is derived.
struct SupportVector {
  VectorPtr vector;
  double beta = 0.0;
  int label = 1;

  double alpha() const { return label * beta; }
};

/// Memoizes k(v, query) by vector address for a single query. Several
/// support-vector sets that hold the same VectorPtr share one evaluation.
///
/// Lookups that hit never write, so once every needed entry has been
/// computed the cache may be read from several threads.
class KernelCache {
 public:
  KernelCache() = default;

  /// Starts a new query; previous entries become invisible.
  void reset(const KernelSpec& spec, const SparseVector& query);

  double get(const SparseVector* v);

  /// Kernel evaluations performed since the last reset.
  std::size_t evaluations() const { return evaluations_; }

 private:
  struct Slot {
    const SparseVector* key = nullptr;
    std::uint32_t generation = 0;
    double value = 0.0;
  };

  void grow();

  const KernelSpec* spec_ = nullptr;
  const SparseVector* query_ = nullptr;
  std::vector<Slot> slots_;
  std::uint32_t generation_ = 0;
  std::size_t used_ = 0;
  std::size_t evaluations_ = 0;
};

enum class UpdateOutcome {
  outside_margin,   // y*z >= 1, nothing changed
  updated_existing,
  appended,
  dropped_zero,     // new member clamped to zero, not inserted
};

/// Diagnostic record of one prune call.
struct PruneTrace {
  std::size_t input_size = 0;
  std::size_t after_reprocess = 0;
  std::size_t after_margin_cut = 0;
  std::size_t after_weight_cut = 0;
  double threshold = 0.0;                 // theta, valid when margin_cut_ran
  bool margin_cut_ran = false;
  std::vector<double> kept_margins;       // stage-2 margins of retained members
  std::vector<double> removed_margins;    // stage-2 margins of removed members
};

/// A budgeted support-vector set with capacity n and box bound C.
///
/// Invariants: every member has 0 <= beta <= C; no two members hold equal
/// vectors; after prune() the size is at most capacity(). Members are kept in
/// insertion order, which fixes the summation order of decision_value().
class SupportVectorSet {
 public:
  SupportVectorSet(std::size_t capacity, double c);

  std::size_t capacity() const { return capacity_; }
  double c() const { return c_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<SupportVector>& members() const { return members_; }

  /// z = sum_i alpha_i k(x_i, x).
  double decision_value(const KernelSpec& spec, const SparseVector& x,
                        KernelCache* cache = nullptr) const;

  /// One projected coordinate-ascent step on the dual for sample (x, y).
  /// When x equals an existing member that member is updated (and takes
  /// label y); otherwise x is appended if its clamped weight is positive.
  UpdateOutcome update(const KernelSpec& spec, VectorPtr x, int y,
                       KernelCache* cache = nullptr);
  UpdateOutcome update(const KernelSpec& spec, const SparseVector& x, int y);

  /// D(alpha) = sum_i y_i alpha_i - 1/2 sum_ij alpha_i alpha_j k(x_i, x_j).
  double dual_objective(const KernelSpec& spec) const;

  /// Three-stage budget cascade: reprocess and drop zero weights, cut
  /// members beyond the margin threshold, then keep the n largest |alpha|.
  void prune(const KernelSpec& spec, PruneTrace* trace = nullptr);

  /// Appends without a coordinate step. Checks label, box and uniqueness.
  void add_member(VectorPtr x, int y, double beta);

  /// Index of the member whose vector equals x, or -1.
  std::ptrdiff_t find(const SparseVector& x) const;

 private:
  std::size_t capacity_;
  double c_;
  std::vector<SupportVector> members_;
};

}  // namespace dcsvm
