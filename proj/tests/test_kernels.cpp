#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "dcsvm/kernel.hpp"
#include "support/test_util.hpp"

using namespace dcsvm;
using testutil::sv;

TEST_CASE("sparse vector rejects unsorted indices and stored zeros") {
  CHECK_THROWS_AS(sv({{2, 1.0}, {1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(sv({{1, 1.0}, {1, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(sv({{0, 0.0}}), std::invalid_argument);
  CHECK(sv({{0, 1.0}, {4, 2.0}}).dimension() == 5);
  CHECK(SparseVector().dimension() == 0);
}

TEST_CASE("from_dense drops zeros") {
  const std::vector<double> d{0.0, 1.5, 0.0, -2.0};
  const auto v = SparseVector::from_dense(d);
  CHECK(v.nnz() == 2);
  CHECK(v == sv({{1, 1.5}, {3, -2.0}}));
  CHECK(v.to_dense(4) == d);
}

TEST_CASE("kernel examples") {
  const auto a = sv({{0, 1.0}, {1, 2.0}});
  const auto b = sv({{0, 3.0}, {1, 4.0}});
  CHECK(eval(KernelSpec::rbf(0.5), a, a) == 1.0);
  CHECK(eval(KernelSpec::rbf(0.5), b, b) == 1.0);
  CHECK(eval(KernelSpec::linear(), a, b) == 11.0);
  CHECK(eval(KernelSpec::rbf(1.0), SparseVector(), sv({{0, 1.0}})) == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(eval(KernelSpec::rbf(1.0), SparseVector(), sv({{0, 1.0}})) == std::exp(-1.0));
}

TEST_CASE("polynomial kernel") {
  const auto a = sv({{0, 1.0}, {1, 2.0}});
  const auto b = sv({{0, 3.0}, {1, 4.0}});
  // (0.5 * 11 + 1)^3
  CHECK(eval(KernelSpec::polynomial(0.5, 3, 1.0), a, b) == doctest::Approx(274.625));
}

TEST_CASE("squared distance examples") {
  const auto b = sv({{0, 3.0}, {1, 4.0}});
  CHECK(squared_distance(b, b) == 0.0);
  CHECK(squared_distance(SparseVector(), b) == 25.0);
  CHECK(squared_distance(sv({{0, 1.0}}), sv({{1, 1.0}})) == 2.0);
}

TEST_CASE("kernel family names") {
  CHECK(parse_kernel_family("linear") == KernelFamily::linear);
  CHECK(parse_kernel_family("rbf") == KernelFamily::rbf);
  CHECK(parse_kernel_family("poly") == KernelFamily::polynomial);
  CHECK(to_string(KernelFamily::polynomial) == "poly");
  CHECK_THROWS_AS(parse_kernel_family("sigmoid"), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::rbf(0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::polynomial(1.0, 0, 0.0).validate(), std::invalid_argument);
  CHECK_NOTHROW(KernelSpec::linear().validate());
}

TEST_CASE("kernel properties on random vectors") {
  std::mt19937_64 rng(7);
  const KernelSpec specs[] = {KernelSpec::linear(), KernelSpec::rbf(0.3), KernelSpec::polynomial(0.2, 3, 1.0)};
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t dim = 1 + trial % 17;
    const auto a = testutil::random_sparse(rng, dim, 0.4);
    const auto b = testutil::random_sparse(rng, dim, 0.6);
    for (const auto& s : specs) {
      CHECK(eval(s, a, b) == eval(s, b, a));
    }
    CHECK(eval(KernelSpec::rbf(0.3), a, a) == 1.0);
    const double kv = eval(KernelSpec::rbf(0.3), a, b);
    CHECK(kv > 0.0);
    CHECK(kv <= 1.0);

    const double d2 = squared_distance(a, b);
    const double expanded = dot(a, a) - 2.0 * dot(a, b) + dot(b, b);
    CHECK(std::fabs(d2 - expanded) <= 1e-9 * std::max(1.0, std::fabs(d2)));
    CHECK((d2 == 0.0) == (a == b));

    const auto da = a.to_dense(dim);
    const auto db = b.to_dense(dim);
    CHECK(std::fabs(eval(KernelSpec::linear(), a, b) - oracle::Linear{}(da, db)) <= 1e-12);
    CHECK(std::fabs(eval(KernelSpec::rbf(0.3), a, b) - oracle::Rbf{0.3}(da, db)) <= 1e-12);
    const double base = 0.2 * oracle::Linear{}(da, db) + 1.0;
    CHECK(std::fabs(eval(KernelSpec::polynomial(0.2, 3, 1.0), a, b) - base * base * base) <=
          1e-12 * std::max(1.0, std::fabs(base * base * base)));
  }
}
