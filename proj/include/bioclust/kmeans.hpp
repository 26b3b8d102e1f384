#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "bioclust/core.hpp"

namespace bioclust {

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
  // Stop when max centroid shift / (1 + centroid norm) drops below this.
  double tol = 1e-6;
};

struct KMeansModel {
  int k = 0;
  Matrix centroids;  // k x d
  double inertia = 0.0;
  int iterations_run = 0;
  std::uint64_t seed = 0;
  // Final assignment of the fit data; no cluster is empty.
  std::vector<int> labels;
  // Inertia after each assignment step of the winning restart.
  std::vector<double> inertia_history;
  int best_restart = 0;
};

// Nearest centroid by Euclidean distance; ties go to the lower index.
inline int nearest_centroid(std::span<const double> x, const Matrix& centroids, double* dist2 = nullptr) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(x, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (dist2) *dist2 = best_d;
  return best;
}

inline std::vector<int> kmeans_assign(const Matrix& X, const Matrix& centroids) {
  if (X.cols() != centroids.cols())
    throw InvalidArgument("kmeans_assign: data has " + std::to_string(X.cols()) + " columns, centroids " +
                          std::to_string(centroids.cols()));
  std::vector<int> out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) out[i] = nearest_centroid(X.row(i), centroids);
  return out;
}

inline std::vector<int> kmeans_assign(const KMeansModel& model, const Matrix& X) { return kmeans_assign(X, model.centroids); }

inline double inertia_of(const Matrix& X, const Matrix& centroids, const std::vector<int>& labels) {
  double s = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) s += squared_distance(X.row(i), centroids.row(static_cast<std::size_t>(labels[i])));
  return s;
}

namespace detail {

// D^2 seeding: first centre uniform, each further centre drawn with
// probability proportional to squared distance from the nearest chosen one.
inline Matrix kmeanspp_init(const Matrix& X, int k, std::mt19937_64& rng) {
  const std::size_t n = X.rows();
  Matrix centres(static_cast<std::size_t>(k), X.cols());
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t idx = pick(rng);
  std::copy_n(X.row(idx).begin(), X.cols(), centres.row(0).begin());

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(X.row(i), centres.row(0));

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    if (total <= 0.0) {
      idx = pick(rng);
    } else {
      const double r = unif(rng) * total;
      double acc = 0.0;
      idx = n;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && r < acc) {
          idx = i;
          break;
        }
      }
      // r landed on the rounding tail: take the last point with mass.
      if (idx == n)
        for (std::size_t i = n; i-- > 0;)
          if (d2[i] > 0.0) {
            idx = i;
            break;
          }
    }
    auto dst = centres.row(static_cast<std::size_t>(c));
    std::copy_n(X.row(idx).begin(), X.cols(), dst.begin());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(X.row(i), dst));
  }
  return centres;
}

// Give each empty cluster the point farthest from its own centroid, taken
// from a cluster that has more than one member. Returns true if anything moved.
inline bool fill_empty_clusters(const Matrix& X, Matrix& centroids, std::vector<int>& labels) {
  const auto k = centroids.rows();
  std::vector<std::size_t> sizes(k, 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  bool moved = false;
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    std::size_t far = X.rows();
    double far_d = -1.0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
      const auto own = static_cast<std::size_t>(labels[i]);
      if (sizes[own] < 2) continue;
      const double d = squared_distance(X.row(i), centroids.row(own));
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far == X.rows()) break;  // fewer points than clusters
    --sizes[static_cast<std::size_t>(labels[far])];
    labels[far] = static_cast<int>(c);
    sizes[c] = 1;
    std::copy_n(X.row(far).begin(), X.cols(), centroids.row(c).begin());
    moved = true;
  }
  return moved;
}

struct LloydResult {
  Matrix centroids;
  std::vector<int> labels;
  double inertia = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

inline LloydResult lloyd(const Matrix& X, Matrix centroids, const KMeansOptions& opt) {
  const std::size_t n = X.rows(), d = X.cols(), k = centroids.rows();
  LloydResult res;
  res.labels.assign(n, 0);
  for (int it = 0; it < opt.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) res.labels[i] = nearest_centroid(X.row(i), centroids);
    fill_empty_clusters(X, centroids, res.labels);
    const double inertia = inertia_of(X, centroids, res.labels);
    assert(res.history.empty() || inertia <= res.history.back() * (1.0 + 1e-12) + 1e-300);
    res.history.push_back(inertia);
    res.iterations = it + 1;

    Matrix next(k, d);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(res.labels[i]);
      ++counts[c];
      for (std::size_t j = 0; j < d; ++j) next(c, j) += X(i, j);
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double norm2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        next(c, j) /= static_cast<double>(counts[c]);
        norm2 += next(c, j) * next(c, j);
      }
      shift = std::max(shift, std::sqrt(squared_distance(next.row(c), centroids.row(c))) / (1.0 + std::sqrt(norm2)));
    }
    centroids = std::move(next);
    if (shift < opt.tol) break;
  }
  // Final assignment against the returned centroids.
  for (std::size_t i = 0; i < n; ++i) res.labels[i] = nearest_centroid(X.row(i), centroids);
  fill_empty_clusters(X, centroids, res.labels);
  res.inertia = inertia_of(X, centroids, res.labels);
  res.history.push_back(res.inertia);
  res.centroids = std::move(centroids);
  return res;
}

}  // namespace detail

// Lloyd's algorithm from k-means++ seeds, best of `restarts` by inertia (ties
// keep the earlier restart). Deterministic in (X, k, seed, options).
inline KMeansModel kmeans_fit(const Matrix& X, int k, std::uint64_t seed, const KMeansOptions& opt = {}) {
  if (k <= 0) throw InvalidArgument("kmeans_fit: k must be positive");
  if (X.empty()) throw InvalidArgument("kmeans_fit: empty data");
  if (static_cast<std::size_t>(k) > X.rows())
    throw InvalidArgument("kmeans_fit: k = " + std::to_string(k) + " exceeds the " + std::to_string(X.rows()) + " rows");
  if (!X.all_finite()) throw InvalidArgument("kmeans_fit: data contains non-finite values");
  if (opt.restarts < 1 || opt.max_iter < 1) throw InvalidArgument("kmeans_fit: restarts and max_iter must be >= 1");

  KMeansModel best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opt.restarts; ++r) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    auto res = detail::lloyd(X, detail::kmeanspp_init(X, k, rng), opt);
    if (res.inertia < best.inertia) {
      best.centroids = std::move(res.centroids);
      best.labels = std::move(res.labels);
      best.inertia = res.inertia;
      best.iterations_run = res.iterations;
      best.inertia_history = std::move(res.history);
      best.best_restart = r;
    }
  }
  best.k = k;
  best.seed = seed;
  return best;
}

}  // namespace bioclust
