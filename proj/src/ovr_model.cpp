#include "dcsvm/ovr_model.hpp"

#include <exception>
#include <stdexcept>

#include "dcsvm/parallel_kernels.hpp"

namespace dcsvm {

OvRModel::OvRModel(ModelConfig config, std::vector<std::string> class_labels,
                   bool discover_labels)
    : config_((config.validate(), config)),
      partition_(config.max_clusters, config.dimension, config.lvq_rate),
      discover_labels_(discover_labels) {
  if (!discover_labels && class_labels.size() < 2) {
    throw std::invalid_argument("one-vs-rest needs at least two class labels");
  }
  for (auto& l : class_labels) add_label(std::move(l));
}

std::size_t OvRModel::add_label(std::string label) {
  if (find_label(label) >= 0) throw std::invalid_argument("duplicate class label '" + label + "'");
  labels_.push_back(std::move(label));
  for (auto& cluster : sets_) cluster.emplace_back(config_.budget, config_.c);
  return labels_.size() - 1;
}

std::ptrdiff_t OvRModel::find_label(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

std::size_t OvRModel::total_support_vectors() const {
  std::size_t total = 0;
  for (const auto& cluster : sets_) {
    for (const auto& s : cluster) total += s.size();
  }
  return total;
}

void OvRModel::fit_sample(VectorPtr x, std::size_t class_index) {
  if (class_index >= labels_.size()) throw std::out_of_range("class index out of range");
  const std::size_t classes = labels_.size();

  if (!partition_.full()) {
    partition_.recruit(*x);
    std::vector<SupportVectorSet> cluster;
    cluster.reserve(classes);
    for (std::size_t c = 0; c < classes; ++c) {
      cluster.emplace_back(config_.budget, config_.c);
      cluster.back().add_member(x, c == class_index ? 1 : -1, founding_weight(config_.c));
    }
    sets_.push_back(std::move(cluster));
    return;
  }

  const std::size_t k = partition_.nearest(*x);
  partition_.drift(k, *x);
  auto& cluster = sets_[k];

  // Fill the cache up front so the class loop below only reads it.
  fit_cache_.reset(config_.kernel, *x);
  bool may_prune = false;
  for (const auto& set : cluster) {
    for (const auto& m : set.members()) fit_cache_.get(m.vector.get());
    may_prune = may_prune || set.size() >= config_.budget;
  }

  const auto n = static_cast<std::ptrdiff_t>(classes);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) if (parallel_classes_ && may_prune && classes > 1)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    try {
      SupportVectorSet& set = cluster[c];
      set.update(config_.kernel, x, static_cast<std::size_t>(c) == class_index ? 1 : -1,
                 &fit_cache_);
      if (set.size() > config_.budget) set.prune(config_.kernel);
    } catch (...) {
#pragma omp critical(dcsvm_ovr_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void OvRModel::fit_sample(VectorPtr x, std::string_view label) {
  std::ptrdiff_t idx = find_label(label);
  if (idx < 0) {
    if (!discover_labels_) throw std::invalid_argument("unknown class label '" + std::string(label) + "'");
    idx = static_cast<std::ptrdiff_t>(add_label(std::string(label)));
  }
  fit_sample(std::move(x), static_cast<std::size_t>(idx));
}

void OvRModel::fit_sample(const SparseVector& x, std::string_view label) {
  fit_sample(std::make_shared<const SparseVector>(x), label);
}

namespace {
struct LastPredict {
  const void* model = nullptr;
  std::size_t evals = 0;
};
thread_local LastPredict last_predict;
}  // namespace

OvRPrediction OvRModel::predict_raw(const SparseVector& x) const {
  if (sets_.empty()) throw std::logic_error("model has no clusters; train it first");
  thread_local KernelCache cache;
  OvRPrediction p;
  p.cluster = partition_.nearest(x);
  cache.reset(config_.kernel, x);
  const auto& cluster = sets_[p.cluster];
  p.scores.resize(cluster.size());
  for (std::size_t c = 0; c < cluster.size(); ++c) {
    p.scores[c] = cluster[c].decision_value(config_.kernel, x, &cache);
    if (p.scores[c] > p.scores[p.class_index]) p.class_index = c;
  }
  p.kernel_evals = cache.evaluations();
  last_predict = {this, p.kernel_evals};
  return p;
}

std::size_t OvRModel::kernel_evals_last_predict() const {
  return last_predict.model == this ? last_predict.evals : 0;
}

void OvRModel::restore_cluster(std::span<const double> centroid,
                               std::vector<SupportVectorSet> sets) {
  if (sets.size() != labels_.size()) throw std::invalid_argument("restored cluster needs one set per class");
  for (const auto& s : sets) {
    if (s.capacity() != config_.budget || s.c() != config_.c) {
      throw std::invalid_argument("restored cluster does not match model budget/C");
    }
  }
  partition_.append_centroid(centroid);
  sets_.push_back(std::move(sets));
}

}  // namespace dcsvm
