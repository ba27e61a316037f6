#pragma once

#include <string>
#include <string_view>

#include "dcsvm/sparse_vector.hpp"

namespace dcsvm {

enum class KernelFamily { linear, rbf, polynomial };

std::string_view to_string(KernelFamily family);
/// Accepts "linear", "rbf", "poly"/"polynomial". Throws std::invalid_argument.
KernelFamily parse_kernel_family(std::string_view name);

/// k(a,b) for one of the supported families:
///   linear      a.b
///   rbf         exp(-gamma * |a-b|^2)
///   polynomial  (gamma * a.b + coef0)^degree
struct KernelSpec {
  KernelFamily family = KernelFamily::rbf;
  double gamma = 1.0;
  int degree = 3;
  double coef0 = 0.0;

  static KernelSpec linear() { return {KernelFamily::linear, 1.0, 1, 0.0}; }
  static KernelSpec rbf(double gamma) { return {KernelFamily::rbf, gamma, 1, 0.0}; }
  static KernelSpec polynomial(double gamma, int degree, double coef0) {
    return {KernelFamily::polynomial, gamma, degree, coef0};
  }

  /// Throws std::invalid_argument when gamma <= 0 or degree < 1.
  void validate() const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

double dot(const SparseVector& a, const SparseVector& b);

/// |a-b|^2 over the union of supports.
double squared_distance(const SparseVector& a, const SparseVector& b);

/// Sparse merge evaluation; symmetric in (a, b) bit for bit.
double eval(const KernelSpec& spec, const SparseVector& a, const SparseVector& b);

}  // namespace dcsvm
