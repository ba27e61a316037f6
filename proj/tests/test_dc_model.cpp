#include <cstring>
#include <random>
#include <stdexcept>
#include <thread>

#include "doctest.h"
#include "dcsvm/dc_model.hpp"
#include "dcsvm/model_io.hpp"
#include "support/property_checks.hpp"
#include "support/test_util.hpp"

using namespace dcsvm;
using testutil::dense_ptr;

namespace {

ModelConfig config2d(std::size_t k, std::size_t n, double rate = 0.1) {
  ModelConfig cfg;
  cfg.max_clusters = k;
  cfg.budget = n;
  cfg.lvq_rate = rate;
  cfg.dimension = 2;
  cfg.kernel = KernelSpec::rbf(1.0);
  cfg.c = 10.0;
  return cfg;
}

bool same_set(const SupportVectorSet& a, const SupportVectorSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.members()[i];
    const auto& y = b.members()[i];
    if (!(*x.vector == *y.vector) || x.label != y.label ||
        std::memcmp(&x.beta, &y.beta, sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("config validation") {
  ModelConfig cfg;
  cfg.max_clusters = 0;
  CHECK_THROWS_AS(DCModel{cfg}, std::invalid_argument);
  cfg = ModelConfig{};
  cfg.budget = 0;
  CHECK_THROWS_AS(DCModel{cfg}, std::invalid_argument);
  cfg = ModelConfig{};
  cfg.lvq_rate = 1.0;
  CHECK_THROWS_AS(DCModel{cfg}, std::invalid_argument);
  cfg = ModelConfig{};
  cfg.c = -1.0;
  CHECK_THROWS_AS(DCModel{cfg}, std::invalid_argument);
}

TEST_CASE("first sample founds a cluster with weight equal to its label") {
  DCModel model(config2d(2, 4));
  const auto v = dense_ptr({0.5, -1.0});
  model.fit_sample(v, 1);
  REQUIRE(model.cluster_count() == 1);
  CHECK(model.centroid(0)[0] == 0.5);
  CHECK(model.centroid(0)[1] == -1.0);
  REQUIRE(model.sv_set(0).size() == 1);
  CHECK(model.sv_set(0).members()[0].alpha() == 1.0);
  CHECK(*model.sv_set(0).members()[0].vector == *v);

  model.fit_sample(dense_ptr({3.0, 3.0}), -1);
  CHECK(model.sv_set(1).members()[0].alpha() == -1.0);
}

TEST_CASE("founding weight is capped at C") {
  auto cfg = config2d(2, 4);
  cfg.c = 0.25;
  DCModel model(cfg);
  model.fit_sample(dense_ptr({1.0, 0.0}), -1);
  CHECK(model.sv_set(0).members()[0].alpha() == -0.25);
  CHECK(founding_weight(0.25) == 0.25);
  CHECK(founding_weight(7.0) == 1.0);
}

TEST_CASE("LVQ step moves the centroid a fraction toward the sample") {
  DCModel model(config2d(1, 4, 0.1));
  model.fit_sample(dense_ptr({0.0, 0.0}), 1);
  model.fit_sample(dense_ptr({1.0, 1.0}), 1);
  CHECK(model.centroid(0)[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(model.centroid(0)[1] == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("routing picks the nearest centroid and touches only that cluster") {
  DCModel model(config2d(2, 4));
  model.fit_sample(dense_ptr({0.0, 0.0}), 1);
  model.fit_sample(dense_ptr({10.0, 0.0}), -1);
  const auto before1 = model.sv_set(1);
  const std::vector<double> mu1(model.centroid(1).begin(), model.centroid(1).end());
  model.fit_sample(dense_ptr({1.0, 0.0}), -1);
  CHECK(model.sv_set(0).size() == 2);
  CHECK(same_set(model.sv_set(1), before1));
  CHECK(std::vector<double>(model.centroid(1).begin(), model.centroid(1).end()) == mu1);
}

TEST_CASE("locality: a full model mutates exactly one cluster per sample") {
  DCModel model(config2d(6, 5, 0.2));
  std::mt19937_64 rng(21);
  for (int i = 0; i < 6; ++i) model.fit_sample(dense_ptr(testutil::random_point(rng)), testutil::random_label(rng));
  for (int i = 0; i < 300; ++i) {
    std::vector<SupportVectorSet> sets;
    std::vector<std::vector<double>> mus;
    for (std::size_t k = 0; k < model.cluster_count(); ++k) {
      sets.push_back(model.sv_set(k));
      mus.emplace_back(model.centroid(k).begin(), model.centroid(k).end());
    }
    const auto p = testutil::random_point(rng);
    const auto x = dense_ptr(p);
    const std::size_t target = model.partition().nearest(*x);
    model.fit_sample(x, testutil::random_label(rng));
    for (std::size_t k = 0; k < model.cluster_count(); ++k) {
      const std::vector<double> mu(model.centroid(k).begin(), model.centroid(k).end());
      if (k == target) {
        // convexity: each coordinate between the old centroid and x
        for (std::size_t j = 0; j < 2; ++j) {
          CHECK(mu[j] >= std::min(mus[k][j], p[j]));
          CHECK(mu[j] <= std::max(mus[k][j], p[j]));
        }
        continue;
      }
      CHECK(mu == mus[k]);
      CHECK(same_set(model.sv_set(k), sets[k]));
    }
  }
}

TEST_CASE("recruitment is unconditional, even for repeated samples") {
  DCModel model(config2d(3, 4));
  const auto v = dense_ptr({1.0, 1.0});
  for (int i = 0; i < 3; ++i) model.fit_sample(v, 1);
  CHECK(model.cluster_count() == 3);
  model.fit_sample(v, 1);
  CHECK(model.cluster_count() == 3);
}

TEST_CASE("predict_raw examples") {
  DCModel empty(config2d(2, 4));
  CHECK_THROWS_AS(empty.predict_raw(testutil::sv({{0, 1.0}})), std::logic_error);

  DCModel one(config2d(2, 4));
  const auto v = dense_ptr({0.3, 0.4});
  one.fit_sample(v, 1);
  const auto p = one.predict_raw(*v);
  CHECK(p.cluster == 0);
  CHECK(p.score == 1.0);
  CHECK(one.kernel_evals_last_predict() == 1);
  CHECK(one.predict(*v) == 1);

  DCModel two(config2d(2, 4));
  two.fit_sample(dense_ptr({-1.0, 0.0}), -1);
  two.fit_sample(dense_ptr({1.0, 0.0}), 1);
  CHECK(two.predict_raw(*dense_ptr({0.0, 5.0})).cluster == 0);  // equidistant
  CHECK(two.predict_raw(*dense_ptr({0.9, 0.0})).cluster == 1);
}

TEST_CASE("predict sign convention") {
  const auto v = dense_ptr({0.0, 1.0});
  const std::vector<double> mu{0.0, 1.0};
  auto model_with = [&](int y, double beta) {
    DCModel m(config2d(1, 4));
    SupportVectorSet s(4, 10.0);
    s.add_member(v, y, beta);
    m.restore_cluster(mu, std::move(s));
    return m;
  };
  const auto pos = model_with(1, 1.0);
  CHECK(pos.predict_raw(*v).score == 1.0);
  CHECK(pos.predict(*v) == 1);
  const auto neg = model_with(-1, 0.2);
  CHECK(neg.predict_raw(*v).score == -0.2);
  CHECK(neg.predict(*v) == -1);
  const auto zero = model_with(-1, 0.0);
  CHECK(zero.predict_raw(*v).score == 0.0);
  CHECK(zero.predict(*v) == 1);
}

TEST_CASE("scores match a brute-force model on 20 hand-made points") {
  const std::vector<std::pair<std::vector<double>, int>> pts{
      {{0.0, 0.0}, 1},   {{1.0, 0.2}, -1},  {{0.1, 0.9}, 1},   {{2.0, 2.0}, -1},  {{0.2, 0.1}, 1},
      {{1.1, 0.0}, -1},  {{1.9, 2.2}, -1},  {{0.0, 1.0}, 1},   {{0.9, 0.3}, 1},   {{2.1, 1.8}, 1},
      {{0.3, 0.3}, -1},  {{1.2, -0.1}, -1}, {{0.05, 1.1}, -1}, {{2.2, 2.1}, -1},  {{0.0, 0.0}, 1},
      {{1.0, 0.2}, -1},  {{0.4, 0.6}, 1},   {{1.5, 1.5}, 1},   {{-0.2, 0.2}, 1},  {{1.8, 2.0}, -1}};
  for (std::size_t k : {1u, 3u}) {
    for (std::size_t n : {2u, 4u, 50u}) {
      auto cfg = config2d(k, n, 0.3);
      cfg.kernel = KernelSpec::rbf(1.5);
      cfg.c = 2.0;
      DCModel model(cfg);
      oracle::DcModel<oracle::Rbf> ref{oracle::Rbf{1.5}, k, n, 0.3, 2.0, {}, {}};
      for (const auto& [p, y] : pts) {
        model.fit_sample(dense_ptr(p), y);
        ref.fit(p, y);
      }
      for (double a = -0.5; a <= 2.5; a += 0.25) {
        for (double b = -0.5; b <= 2.5; b += 0.25) {
          const auto got = model.predict_raw(*dense_ptr({a, b}));
          const auto [cluster, score] = ref.predict({a, b});
          CHECK(got.cluster == cluster);
          CHECK(got.score == score);
        }
      }
    }
  }
}

TEST_CASE("kernel evaluation count per predict") {
  auto cfg = config2d(3, 8, 0.1);
  DCModel model(cfg);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) model.fit_sample(dense_ptr(testutil::random_point(rng)), testutil::random_label(rng));
  for (int q = 0; q < 200; ++q) {
    const auto x = dense_ptr(testutil::random_point(rng));
    const auto p = model.predict_raw(*x);
    CHECK(model.kernel_evals_last_predict() <= 8);
    CHECK(model.kernel_evals_last_predict() == model.sv_set(p.cluster).size());
    CHECK(p.kernel_evals == model.kernel_evals_last_predict());
  }
  // each thread sees its own count
  std::size_t other = 99;
  std::thread t([&] { other = model.kernel_evals_last_predict(); });
  t.join();
  CHECK(other == 0);
}

TEST_CASE("property: cluster count and budget law") {
  const auto v = checks::cluster_count(31);
  INFO(v.detail);
  CHECK(v.pass);
}

TEST_CASE("property: kernel evaluations bounded by n") {
  const auto v = checks::kernel_evals_bound(32);
  INFO(v.detail);
  CHECK(v.pass);
}

TEST_CASE("identical streams give bit-identical models") {
  std::mt19937_64 rng(8);
  std::vector<std::pair<VectorPtr, int>> stream;
  for (int i = 0; i < 400; ++i) stream.emplace_back(dense_ptr(testutil::random_point(rng, 6)), testutil::random_label(rng));
  auto run = [&] {
    DCModel m(config2d(5, 6, 0.05));
    for (const auto& [x, y] : stream) m.fit_sample(testutil::ptr(*x), y);
    return save_model_string(ModelBundle{std::move(m), {"+1", "-1"}, std::nullopt});
  };
  CHECK(run() == run());
}
