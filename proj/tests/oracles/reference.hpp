#pragma once

// Brute-force reference used only by the tests. It works on dense points,
// stores signed weights, and transcribes the update / prune / divide-and-
// conquer listings line by line without sharing any code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Point = std::vector<double>;

struct Rbf {
  double gamma;
  double operator()(const Point& a, const Point& b) const {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return std::exp(-gamma * d2);
  }
};

struct Linear {
  double operator()(const Point& a, const Point& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }
};

struct Member {
  Point x;
  int y;
  double alpha;  // signed
};

template <class K>
double f(const std::vector<Member>& set, const K& k, const Point& x) {
  double z = 0.0;
  for (const auto& m : set) z += m.alpha * k(m.x, x);
  return z;
}

template <class K>
double dual(const std::vector<Member>& set, const K& k) {
  double lin = 0.0, quad = 0.0;
  for (const auto& a : set) {
    lin += a.y * a.alpha;
    for (const auto& b : set) quad += a.alpha * b.alpha * k(a.x, b.x);
  }
  return lin - 0.5 * quad;
}

inline double clamp01c(double v, double c) { return v < 0.0 ? 0.0 : (v > c ? c : v); }

/// The online coordinate update for one sample (x, y).
template <class K>
void update(std::vector<Member>& set, const K& k, double c, const Point& x, int y) {
  const double z = f(set, k, x);
  if (y * z >= 1.0) return;
  const double delta = (1.0 - y * z) / k(x, x);
  for (auto& m : set) {
    if (m.x == x) {
      const double b = y * m.alpha;
      m.alpha = y * clamp01c(b + delta, c);
      m.y = y;
      return;
    }
  }
  const double b = clamp01c(delta, c);
  if (b != 0.0) set.push_back({x, y, y * b});
}

/// The three-stage pruning listing; output keeps the input order.
template <class K>
std::vector<Member> prune(std::vector<Member> a, const K& k, double c, std::size_t n) {
  // lines 3-9: reprocess everybody, then keep non-zero weights
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Point xi = a[i].x;
    update(a, k, c, xi, a[i].y);
  }
  std::vector<Member> b;
  for (const auto& m : a) {
    if (m.alpha != 0.0) b.push_back(m);
  }
  std::vector<double> z(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) z[i] = b[i].y * f(b, k, b[i].x);

  // lines 10-15
  std::vector<bool> keep(b.size(), true);
  if (b.size() > n) {
    std::vector<std::size_t> idx(b.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) { return z[p] > z[q]; });
    const double theta = std::min(0.0, z[idx[n - 1]]);
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (z[i] < theta) keep[i] = false;
    }
  }
  std::vector<Member> s;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (keep[i]) s.push_back(b[i]);
  }

  // lines 16-19
  if (s.size() > n) {
    std::vector<std::size_t> idx(s.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t p, std::size_t q) { return std::fabs(s[p].alpha) > std::fabs(s[q].alpha); });
    std::vector<bool> top(s.size(), false);
    for (std::size_t r = 0; r < n; ++r) top[idx[r]] = true;
    std::vector<Member> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (top[i]) out.push_back(s[i]);
    }
    s = std::move(out);
  }
  return s;
}

/// Whole divide-and-conquer training loop on dense points.
template <class K>
struct DcModel {
  K k;
  std::size_t max_clusters;
  std::size_t n;
  double rate;
  double c;
  std::vector<Point> mu;
  std::vector<std::vector<Member>> sets;

  void fit(const Point& x, int y) {
    if (mu.size() < max_clusters) {
      mu.push_back(x);
      sets.push_back({{x, y, y * std::min(1.0, c)}});
      return;
    }
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t m = 0; m < mu.size(); ++m) {
      double d = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d += (mu[m][i] - x[i]) * (mu[m][i] - x[i]);
      if (best_d < 0.0 || d < best_d) {
        best_d = d;
        best = m;
      }
    }
    for (std::size_t i = 0; i < x.size(); ++i) mu[best][i] += rate * (x[i] - mu[best][i]);
    update(sets[best], k, c, x, y);
    if (sets[best].size() > n) sets[best] = prune(sets[best], k, c, n);
  }

  std::pair<std::size_t, double> predict(const Point& x) const {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t m = 0; m < mu.size(); ++m) {
      double d = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d += (mu[m][i] - x[i]) * (mu[m][i] - x[i]);
      if (best_d < 0.0 || d < best_d) {
        best_d = d;
        best = m;
      }
    }
    return {best, f(sets[best], k, x)};
  }
};

}  // namespace oracle
