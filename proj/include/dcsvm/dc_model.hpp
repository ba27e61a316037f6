#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dcsvm/kernel.hpp"
#include "dcsvm/lvq_partition.hpp"
#include "dcsvm/support_vector_set.hpp"

namespace dcsvm {

/// Hyperparameters shared by the binary and one-vs-rest models.
struct ModelConfig {
  std::size_t max_clusters = 256;  // K
  std::size_t budget = 64;         // n, per support-vector set
  double lvq_rate = 0.05;          // gamma of the centroid update
  KernelSpec kernel = KernelSpec::rbf(1.0);
  double c = 10.0;
  std::uint64_t seed = 1;
  std::size_t dimension = 0;       // centroid length

  /// Throws std::invalid_argument on K = 0, n = 0, C <= 0, rate outside
  /// (0,1) or an invalid kernel.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Weight given to the sample that founds a cluster: its label, i.e.
/// y*alpha = 1, capped at C so the box constraint holds.
inline double founding_weight(double c) { return c < 1.0 ? c : 1.0; }

struct Prediction {
  std::size_t cluster = 0;
  double score = 0.0;
  std::size_t kernel_evals = 0;
};

/// Divide-and-conquer budgeted kernel SVM for a binary (+1/-1) task: an
/// LVQ partition with one budgeted support-vector set per cluster.
class DCModel {
 public:
  explicit DCModel(ModelConfig config);

  const ModelConfig& config() const { return config_; }
  const LvqPartition& partition() const { return partition_; }
  std::size_t cluster_count() const { return sets_.size(); }
  std::span<const double> centroid(std::size_t k) const { return partition_.centroid(k); }
  const SupportVectorSet& sv_set(std::size_t k) const { return sets_[k]; }
  std::size_t total_support_vectors() const;

  void fit_sample(VectorPtr x, int y);
  void fit_sample(const SparseVector& x, int y);

  /// Routes x to its nearest cluster and evaluates only that cluster's set.
  /// Throws std::logic_error on an untrained model.
  Prediction predict_raw(const SparseVector& x) const;

  /// Sign of the score; 0 maps to +1.
  int predict(const SparseVector& x) const;

  /// Kernel evaluations of the most recent predict_raw on this model made by
  /// the calling thread. Each thread sees its own count.
  std::size_t kernel_evals_last_predict() const;

  /// Appends a cluster built elsewhere (model loading).
  void restore_cluster(std::span<const double> centroid, SupportVectorSet set);

 private:
  ModelConfig config_;
  LvqPartition partition_;
  std::vector<SupportVectorSet> sets_;
};

}  // namespace dcsvm
