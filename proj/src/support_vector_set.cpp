#include "dcsvm/support_vector_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dcsvm/parallel_kernels.hpp"

namespace dcsvm {

void check_label(int y) {
  if (y != 1 && y != -1) {
    throw std::invalid_argument("binary label must be -1 or +1, got " + std::to_string(y));
  }
}

// ---------------------------------------------------------------------------
// KernelCache

void KernelCache::reset(const KernelSpec& spec, const SparseVector& query) {
  spec_ = &spec;
  query_ = &query;
  used_ = 0;
  evaluations_ = 0;
  if (++generation_ == 0) {
    for (auto& s : slots_) s.generation = 0;
    generation_ = 1;
  }
  if (slots_.empty()) slots_.resize(256);
}

namespace {
inline std::size_t pointer_slot(const SparseVector* p, std::size_t mask) {
  auto h = reinterpret_cast<std::uintptr_t>(p);
  h ^= h >> 17;
  h *= 0x9e3779b97f4a7c15ULL;
  return (h >> 20) & mask;
}
}  // namespace

double KernelCache::get(const SparseVector* v) {
  std::size_t mask = slots_.size() - 1;
  for (std::size_t i = pointer_slot(v, mask);; i = (i + 1) & mask) {
    Slot& s = slots_[i];
    if (s.generation == generation_) {
      if (s.key == v) return s.value;
      continue;
    }
    const double value = eval(*spec_, *v, *query_);
    ++evaluations_;
    s = {v, generation_, value};
    if (++used_ * 2 > slots_.size()) grow();
    return value;
  }
}

void KernelCache::grow() {
  std::vector<Slot> old(slots_.size() * 2);
  old.swap(slots_);
  const std::size_t mask = slots_.size() - 1;
  for (const Slot& s : old) {
    if (s.generation != generation_) continue;
    std::size_t i = pointer_slot(s.key, mask);
    while (slots_[i].generation == generation_) i = (i + 1) & mask;
    slots_[i] = s;
  }
}

// ---------------------------------------------------------------------------
// SupportVectorSet

SupportVectorSet::SupportVectorSet(std::size_t capacity, double c) : capacity_(capacity), c_(c) {
  if (capacity == 0) throw std::invalid_argument("support vector budget must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("C must be > 0");
}

std::ptrdiff_t SupportVectorSet::find(const SparseVector& x) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const SparseVector& v = *members_[i].vector;
    if (&v == &x || v == x) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

double SupportVectorSet::decision_value(const KernelSpec& spec, const SparseVector& x,
                                        KernelCache* cache) const {
  double z = 0.0;
  if (cache != nullptr) {
    for (const auto& m : members_) z += m.alpha() * cache->get(m.vector.get());
    return z;
  }
  if (members_.size() * (x.nnz() + 1) < kernels::kParallelThreshold) {
    for (const auto& m : members_) z += m.alpha() * eval(spec, *m.vector, x);
    return z;
  }
  thread_local std::vector<const SparseVector*> ptrs;
  thread_local std::vector<double> row;
  ptrs.resize(members_.size());
  row.resize(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) ptrs[i] = members_[i].vector.get();
  kernels::omp::kernel_row(spec, ptrs, x, row);
  for (std::size_t i = 0; i < members_.size(); ++i) z += members_[i].alpha() * row[i];
  return z;
}

UpdateOutcome SupportVectorSet::update(const KernelSpec& spec, VectorPtr x, int y,
                                       KernelCache* cache) {
  check_label(y);
  const double z = decision_value(spec, *x, cache);
  if (y * z >= 1.0) return UpdateOutcome::outside_margin;

  const double kxx = eval(spec, *x, *x);
  if (!(kxx > 0.0)) throw DegenerateSample("k(x,x) <= 0; coordinate step undefined");
  const double step = (1.0 - y * z) / kxx;

  if (const auto idx = find(*x); idx >= 0) {
    SupportVector& m = members_[static_cast<std::size_t>(idx)];
    const double beta = y * m.alpha();  // may be negative if the label flips
    m.beta = std::clamp(beta + step, 0.0, c_);
    m.label = y;
    return UpdateOutcome::updated_existing;
  }
  const double beta = std::clamp(step, 0.0, c_);
  if (beta == 0.0) return UpdateOutcome::dropped_zero;
  members_.push_back({std::move(x), beta, y});
  return UpdateOutcome::appended;
}

UpdateOutcome SupportVectorSet::update(const KernelSpec& spec, const SparseVector& x, int y) {
  return update(spec, std::make_shared<const SparseVector>(x), y);
}

double SupportVectorSet::dual_objective(const KernelSpec& spec) const {
  double linear = 0.0;
  double quad = 0.0;
  for (const auto& a : members_) {
    linear += a.beta;  // y_i * alpha_i
    for (const auto& b : members_) quad += a.alpha() * b.alpha() * eval(spec, *a.vector, *b.vector);
  }
  return linear - 0.5 * quad;
}

void SupportVectorSet::add_member(VectorPtr x, int y, double beta) {
  check_label(y);
  if (!(beta >= 0.0 && beta <= c_)) {
    throw std::invalid_argument("support vector weight violates 0 <= y*alpha <= C");
  }
  if (find(*x) >= 0) throw std::invalid_argument("duplicate support vector");
  members_.push_back({std::move(x), beta, y});
}

void SupportVectorSet::prune(const KernelSpec& spec, PruneTrace* trace) {
  const std::size_t m = members_.size();
  if (trace) {
    *trace = PruneTrace{};
    trace->input_size = m;
  }

  std::vector<const SparseVector*> ptrs(m);
  for (std::size_t i = 0; i < m; ++i) ptrs[i] = members_[i].vector.get();
  std::vector<double> gram(m * m);
  kernels::omp::kernel_matrix(spec, ptrs, gram);

  // Stage 1: reprocess every member in order, each step seeing the weights
  // left by the previous ones.
  for (std::size_t i = 0; i < m; ++i) {
    SupportVector& sv = members_[i];
    double z = 0.0;
    for (std::size_t n = 0; n < m; ++n) z += members_[n].alpha() * gram[n * m + i];
    if (sv.label * z >= 1.0) continue;
    const double kii = gram[i * m + i];
    if (!(kii > 0.0)) throw DegenerateSample("k(x,x) <= 0; coordinate step undefined");
    sv.beta = std::clamp(sv.beta + (1.0 - sv.label * z) / kii, 0.0, c_);
  }

  std::vector<std::size_t> alive;
  for (std::size_t i = 0; i < m; ++i) {
    if (members_[i].beta != 0.0) alive.push_back(i);
  }
  if (trace) trace->after_reprocess = alive.size();

  // Stage 2: margins against the reprocessed set, then cut below theta.
  if (alive.size() > capacity_) {
    std::vector<double> margin(m, 0.0);
    for (std::size_t i : alive) {
      double z = 0.0;
      for (std::size_t n : alive) z += members_[n].alpha() * gram[n * m + i];
      margin[i] = members_[i].label * z;
    }
    std::vector<std::size_t> order = alive;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return margin[a] > margin[b]; });
    const double theta = std::min(0.0, margin[order[capacity_ - 1]]);
    std::vector<std::size_t> kept;
    for (std::size_t i : alive) {
      if (margin[i] < theta) {
        if (trace) trace->removed_margins.push_back(margin[i]);
      } else {
        kept.push_back(i);
        if (trace) trace->kept_margins.push_back(margin[i]);
      }
    }
    if (trace) {
      trace->threshold = theta;
      trace->margin_cut_ran = true;
    }
    alive = std::move(kept);
  }
  if (trace) trace->after_margin_cut = alive.size();

  // Stage 3: largest |alpha| first, older members win ties.
  if (alive.size() > capacity_) {
    std::stable_sort(alive.begin(), alive.end(), [&](std::size_t a, std::size_t b) {
      return members_[a].beta > members_[b].beta;
    });
    alive.resize(capacity_);
    std::sort(alive.begin(), alive.end());
  }
  if (trace) trace->after_weight_cut = alive.size();

  std::vector<SupportVector> out;
  out.reserve(alive.size());
  for (std::size_t i : alive) out.push_back(std::move(members_[i]));
  members_ = std::move(out);
}

}  // namespace dcsvm
