#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "bioclust/core.hpp"
#include "bioclust/kmeans.hpp"

namespace bioclust {

// Mean silhouette (b - a) / max(a, b) over all points, with a the mean
// distance to the rest of the point's own cluster and b the smallest mean
// distance to another cluster. Points in singleton clusters score 0.
inline double silhouette_score(const Matrix& X, const std::vector<int>& assignment) {
  const std::size_t n = X.rows();
  if (assignment.size() != n) throw InvalidArgument("silhouette_score: assignment length mismatch");
  if (n == 0) throw InvalidArgument("silhouette_score: empty data");

  int k = 0;
  for (int a : assignment) {
    if (a < 0) throw InvalidArgument("silhouette_score: negative cluster id");
    k = std::max(k, a + 1);
  }
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];
  const auto non_empty = std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; });
  if (non_empty < 2) throw InvalidArgument("silhouette_score: need at least two non-empty clusters");

  // sums(i, c) = sum of distances from point i to members of cluster c
  Matrix sums(n, static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::sqrt(squared_distance(X.row(i), X.row(j)));
      sums(i, static_cast<std::size_t>(assignment[j])) += d;
      sums(j, static_cast<std::size_t>(assignment[i])) += d;
    }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = static_cast<std::size_t>(assignment[i]);
    if (sizes[own] < 2) continue;
    const double a = sums(i, own) / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sizes.size(); ++c)
      if (c != own && sizes[c] > 0) b = std::min(b, sums(i, c) / static_cast<double>(sizes[c]));
    const double m = std::max(a, b);
    total += m > 0.0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(n);
}

struct SilhouetteSweep {
  std::vector<int> k_values;
  std::vector<double> scores;
  int best_k = 0;
};

// K-means + silhouette for each k in [k_min, k_max]; best_k is the argmax,
// ties to the smaller k.
inline SilhouetteSweep silhouette_sweep(const Matrix& X, int k_min, int k_max, std::uint64_t seed,
                                        const KMeansOptions& opt = {}) {
  if (k_min < 2) throw InvalidArgument("silhouette_sweep: k_min must be >= 2");
  if (k_max < k_min) throw InvalidArgument("silhouette_sweep: k_max < k_min");
  if (static_cast<std::size_t>(k_max) + 1 > X.rows())
    throw InvalidArgument("silhouette_sweep: k_max must be <= n - 1 (n = " + std::to_string(X.rows()) + ")");
  SilhouetteSweep out;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = k_min; k <= k_max; ++k) {
    const auto model = kmeans_fit(X, k, seed, opt);
    const double s = silhouette_score(X, model.labels);
    out.k_values.push_back(k);
    out.scores.push_back(s);
    if (s > best) {
      best = s;
      out.best_k = k;
    }
  }
  return out;
}

}  // namespace bioclust
