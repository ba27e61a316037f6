#include "dcsvm/dc_model.hpp"

#include <stdexcept>

namespace dcsvm {

void ModelConfig::validate() const {
  if (max_clusters == 0) throw std::invalid_argument("cluster count K must be >= 1");
  if (budget == 0) throw std::invalid_argument("budget n must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("C must be > 0");
  if (!(lvq_rate > 0.0 && lvq_rate < 1.0)) throw std::invalid_argument("LVQ rate must lie in (0,1)");
  kernel.validate();
}

namespace {
struct LastPredict {
  const void* model = nullptr;
  std::size_t evals = 0;
};
thread_local LastPredict last_predict;
}  // namespace

DCModel::DCModel(ModelConfig config)
    : config_((config.validate(), config)),
      partition_(config.max_clusters, config.dimension, config.lvq_rate) {}

std::size_t DCModel::total_support_vectors() const {
  std::size_t total = 0;
  for (const auto& s : sets_) total += s.size();
  return total;
}

void DCModel::fit_sample(VectorPtr x, int y) {
  check_label(y);
  if (!partition_.full()) {
    partition_.recruit(*x);
    SupportVectorSet set(config_.budget, config_.c);
    set.add_member(std::move(x), y, founding_weight(config_.c));
    sets_.push_back(std::move(set));
    return;
  }
  const std::size_t k = partition_.nearest(*x);
  partition_.drift(k, *x);
  SupportVectorSet& set = sets_[k];
  set.update(config_.kernel, std::move(x), y);
  if (set.size() > config_.budget) set.prune(config_.kernel);
}

void DCModel::fit_sample(const SparseVector& x, int y) {
  fit_sample(std::make_shared<const SparseVector>(x), y);
}

Prediction DCModel::predict_raw(const SparseVector& x) const {
  if (sets_.empty()) throw std::logic_error("model has no clusters; train it first");
  Prediction p;
  p.cluster = partition_.nearest(x);
  const SupportVectorSet& set = sets_[p.cluster];
  p.score = set.decision_value(config_.kernel, x);
  p.kernel_evals = set.size();
  last_predict = {this, p.kernel_evals};
  return p;
}

int DCModel::predict(const SparseVector& x) const {
  return predict_raw(x).score >= 0.0 ? 1 : -1;
}

std::size_t DCModel::kernel_evals_last_predict() const {
  return last_predict.model == this ? last_predict.evals : 0;
}

void DCModel::restore_cluster(std::span<const double> centroid, SupportVectorSet set) {
  if (set.capacity() != config_.budget || set.c() != config_.c) {
    throw std::invalid_argument("restored cluster does not match model budget/C");
  }
  partition_.append_centroid(centroid);
  sets_.push_back(std::move(set));
}

}  // namespace dcsvm
