#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcsvm/dc_model.hpp"

namespace dcsvm {

struct OvRPrediction {
  std::size_t cluster = 0;
  std::size_t class_index = 0;
  std::vector<double> scores;  // one per class label
  std::size_t kernel_evals = 0;
};

/// One-vs-rest reduction over a single shared LVQ partition. Every cluster
/// owns one budgeted support-vector set per class; class c's set sees each
/// routed sample with y = +1 if its label is c and -1 otherwise.
///
/// Samples are stored once and shared by all class sets of a cluster, so a
/// query evaluates k(v, x) once per distinct support vector.
class OvRModel {
 public:
  /// Throws std::invalid_argument when fewer than two labels are given
  /// and discovery is off, or when labels repeat.
  OvRModel(ModelConfig config, std::vector<std::string> class_labels,
           bool discover_labels = false);

  const ModelConfig& config() const { return config_; }
  const LvqPartition& partition() const { return partition_; }
  const std::vector<std::string>& class_labels() const { return labels_; }
  std::size_t class_count() const { return labels_.size(); }
  std::size_t cluster_count() const { return sets_.size(); }
  std::span<const double> centroid(std::size_t k) const { return partition_.centroid(k); }
  const SupportVectorSet& sv_set(std::size_t cluster, std::size_t cls) const {
    return sets_[cluster][cls];
  }
  std::size_t total_support_vectors() const;

  /// Index of `label`, or -1.
  std::ptrdiff_t find_label(std::string_view label) const;

  void fit_sample(VectorPtr x, std::size_t class_index);
  /// Unknown labels are appended when discovery is on, rejected otherwise.
  void fit_sample(VectorPtr x, std::string_view label);
  void fit_sample(const SparseVector& x, std::string_view label);

  /// Nearest cluster once, then argmax over its per-class decision values;
  /// ties go to the earlier label. Throws std::logic_error when untrained.
  OvRPrediction predict_raw(const SparseVector& x) const;
  std::size_t predict(const SparseVector& x) const { return predict_raw(x).class_index; }
  const std::string& predict_label(const SparseVector& x) const { return labels_[predict(x)]; }

  std::size_t kernel_evals_last_predict() const;

  /// Appends a cluster built elsewhere (model loading); one set per class.
  void restore_cluster(std::span<const double> centroid, std::vector<SupportVectorSet> sets);

  /// Runs the per-class updates with OpenMP when true (the default).
  /// Both paths produce bit-identical models.
  void set_parallel_classes(bool on) { parallel_classes_ = on; }

 private:
  std::size_t add_label(std::string label);

  ModelConfig config_;
  LvqPartition partition_;
  std::vector<std::string> labels_;
  bool discover_labels_;
  bool parallel_classes_ = true;
  std::vector<std::vector<SupportVectorSet>> sets_;  // [cluster][class]
  KernelCache fit_cache_;
};

}  // namespace dcsvm
