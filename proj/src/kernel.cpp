#include "dcsvm/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace dcsvm {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::linear: return "linear";
    case KernelFamily::rbf: return "rbf";
    case KernelFamily::polynomial: return "poly";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "linear") return KernelFamily::linear;
  if (name == "rbf" || name == "gaussian") return KernelFamily::rbf;
  if (name == "poly" || name == "polynomial") return KernelFamily::polynomial;
  throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (family != KernelFamily::linear && !(gamma > 0.0)) {
    throw std::invalid_argument("kernel gamma must be > 0");
  }
  if (degree < 1) throw std::invalid_argument("kernel degree must be >= 1");
}

double dot(const SparseVector& a, const SparseVector& b) {
  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0, j = 0;
  double sum = 0.0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].index == eb[j].index) {
      sum += ea[i].value * eb[j].value;
      ++i;
      ++j;
    } else if (ea[i].index < eb[j].index) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

double squared_distance(const SparseVector& a, const SparseVector& b) {
  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0, j = 0;
  double sum = 0.0;
  while (i < ea.size() || j < eb.size()) {
    double d;
    if (j == eb.size() || (i < ea.size() && ea[i].index < eb[j].index)) {
      d = ea[i++].value;
    } else if (i == ea.size() || eb[j].index < ea[i].index) {
      d = eb[j++].value;
    } else {
      d = ea[i++].value - eb[j++].value;
    }
    sum += d * d;
  }
  return sum;
}

double eval(const KernelSpec& spec, const SparseVector& a, const SparseVector& b) {
  switch (spec.family) {
    case KernelFamily::linear:
      return dot(a, b);
    case KernelFamily::rbf:
      return std::exp(-spec.gamma * squared_distance(a, b));
    case KernelFamily::polynomial: {
      const double base = spec.gamma * dot(a, b) + spec.coef0;
      double r = 1.0;
      for (int p = 0; p < spec.degree; ++p) r *= base;
      return r;
    }
  }
  return 0.0;
}

}  // namespace dcsvm
