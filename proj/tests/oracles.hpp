#pragma once

// Independent reference computations used by the tests.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bioclust/core.hpp"

namespace oracle {

using bioclust::Matrix;

// One-sided periodogram by direct DFT, density scaling, mean removed.
struct Periodogram {
  std::vector<double> freqs, power;
  double df = 0;
  double total() const {
    double s = 0;
    for (double p : power) s += p;
    return s * df;
  }
  double above(double hz) const {
    double s = 0;
    for (std::size_t k = 0; k < power.size(); ++k)
      if (freqs[k] > hz) s += power[k];
    return s * df;
  }
};

inline Periodogram direct_periodogram(const std::vector<double>& x, double fs) {
  const std::size_t n = x.size();
  double mu = 0;
  for (double v : x) mu += v;
  mu /= static_cast<double>(n);
  Periodogram p;
  p.df = fs / static_cast<double>(n);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0;
    for (std::size_t t = 0; t < n; ++t)
      acc += (x[t] - mu) * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n));
    double v = std::norm(acc) / (fs * static_cast<double>(n));
    if (k != 0 && !(n % 2 == 0 && k == n / 2)) v *= 2;
    p.freqs.push_back(static_cast<double>(k) * p.df);
    p.power.push_back(v);
  }
  return p;
}

// Power of x at one frequency (Goertzel-style single-bin DFT).
inline double tone_power(const std::vector<double>& x, double fs, double hz) {
  double mu = 0;
  for (double v : x) mu += v;
  mu /= static_cast<double>(x.size());
  std::complex<double> acc = 0;
  for (std::size_t t = 0; t < x.size(); ++t)
    acc += (x[t] - mu) * std::polar(1.0, -2.0 * std::numbers::pi * hz * static_cast<double>(t) / fs);
  return std::norm(acc);
}

inline double population_variance(const std::vector<double>& x) {
  double mu = 0, s = 0;
  for (double v : x) mu += v;
  mu /= static_cast<double>(x.size());
  for (double v : x) s += (v - mu) * (v - mu);
  return s / static_cast<double>(x.size());
}

// Within-cluster sum of squares of an assignment.
inline double wcss(const Matrix& X, const std::vector<int>& a, int k) {
  double total = 0;
  for (int c = 0; c < k; ++c) {
    std::vector<double> mu(X.cols(), 0.0);
    int cnt = 0;
    for (std::size_t i = 0; i < X.rows(); ++i)
      if (a[i] == c) {
        ++cnt;
        for (std::size_t j = 0; j < X.cols(); ++j) mu[j] += X(i, j);
      }
    if (cnt == 0) continue;
    for (double& m : mu) m /= cnt;
    for (std::size_t i = 0; i < X.rows(); ++i)
      if (a[i] == c)
        for (std::size_t j = 0; j < X.cols(); ++j) total += (X(i, j) - mu[j]) * (X(i, j) - mu[j]);
  }
  return total;
}

// Minimum WCSS over every partition into exactly k non-empty clusters.
inline double exhaustive_min_wcss(const Matrix& X, int k) {
  const std::size_t n = X.rows();
  std::vector<int> a(n, 0);
  double best = std::numeric_limits<double>::infinity();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= static_cast<std::size_t>(k);
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t c = code;
    std::vector<int> used(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<int>(c % static_cast<std::size_t>(k));
      c /= static_cast<std::size_t>(k);
      used[static_cast<std::size_t>(a[i])] = 1;
    }
    bool all = true;
    for (int u : used) all = all && u;
    if (all) best = std::min(best, wcss(X, a, k));
  }
  return best;
}

// Mean silhouette straight from the definition.
inline double silhouette(const Matrix& X, const std::vector<int>& a) {
  const std::size_t n = X.rows();
  int k = 0;
  for (int v : a) k = std::max(k, v + 1);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
    std::vector<int> cnt(static_cast<std::size_t>(k), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sum[static_cast<std::size_t>(a[j])] += std::sqrt(bioclust::squared_distance(X.row(i), X.row(j)));
      ++cnt[static_cast<std::size_t>(a[j])];
    }
    const auto own = static_cast<std::size_t>(a[i]);
    if (cnt[own] == 0) continue;  // singleton scores 0
    const double ai = sum[own] / cnt[own];
    double bi = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sum.size(); ++c)
      if (c != own && cnt[c] > 0) bi = std::min(bi, sum[c] / cnt[c]);
    total += (bi - ai) / std::max(ai, bi);
  }
  return total / static_cast<double>(n);
}

inline Matrix random_matrix(std::size_t n, std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = g(rng);
  return m;
}

// True when every opened element is closed in order and there is one root.
inline bool well_formed_xml(const std::string& s) {
  std::vector<std::string> stack;
  int roots = 0;
  std::size_t i = 0;
  while ((i = s.find('<', i)) != std::string::npos) {
    const auto close = s.find('>', i);
    if (close == std::string::npos) return false;
    const std::string tag = s.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (tag[0] == '/') {
      const auto name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    const auto name = tag.substr(0, tag.find_first_of(" \t\n/"));
    if (stack.empty()) ++roots;
    if (tag.back() != '/') stack.push_back(name);
  }
  return stack.empty() && roots == 1;
}

inline std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace oracle
