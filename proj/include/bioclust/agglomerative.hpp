#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "bioclust/core.hpp"

namespace bioclust {

// One merge of the dendrogram. Leaves are nodes 0..n-1; the m-th merge
// creates node n + m.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double cost = 0.0;  // Ward height: sqrt(2 * increase in within-cluster SS)
  std::size_t size = 0;
};

struct AgglomerativeModel {
  std::size_t n = 0;
  std::vector<Merge> merges;  // n - 1 entries
  int cut_k = 0;
  std::vector<int> labels;  // flat clusters for cut_k
};

// Flat clusters after applying the first n - k merges. Cluster ids follow the
// order in which clusters first appear in row order.
inline std::vector<int> cut_tree(std::size_t n, const std::vector<Merge>& merges, int k) {
  if (k <= 0 || static_cast<std::size_t>(k) > n) throw InvalidArgument("cut_tree: k must lie in [1, n]");
  std::vector<std::size_t> parent(2 * n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t m = 0; m < n - static_cast<std::size_t>(k); ++m) {
    parent[find(merges[m].left)] = n + m;
    parent[find(merges[m].right)] = n + m;
  }
  std::vector<int> labels(n);
  std::vector<int> id_of(2 * n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    if (id_of[root] < 0) id_of[root] = next++;
    labels[i] = id_of[root];
  }
  return labels;
}

// Bottom-up Ward linkage on Euclidean distance. The working matrix holds
// squared Ward distances updated by the Lance-Williams recurrence; ties pick
// the lowest (i, j) slot pair.
inline AgglomerativeModel agglomerative_fit(const Matrix& X, int k) {
  const std::size_t n = X.rows();
  if (k <= 0) throw InvalidArgument("agglomerative_fit: k must be positive");
  if (n == 0) throw InvalidArgument("agglomerative_fit: empty data");
  if (static_cast<std::size_t>(k) > n)
    throw InvalidArgument("agglomerative_fit: k = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " rows");

  Matrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = squared_distance(X.row(i), X.row(j));

  std::vector<std::size_t> node(n), size(n, 1);
  std::iota(node.begin(), node.end(), std::size_t{0});
  std::vector<bool> active(n, true);

  AgglomerativeModel model;
  model.n = n;
  model.merges.reserve(n > 0 ? n - 1 : 0);
  for (std::size_t m = 0; m + 1 < n; ++m) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j)
        if (active[j] && dist(i, j) < best) {
          best = dist(i, j);
          bi = i;
          bj = j;
        }
    }

    const double ni = static_cast<double>(size[bi]), nj = static_cast<double>(size[bj]);
    for (std::size_t c = 0; c < n; ++c) {
      if (!active[c] || c == bi || c == bj) continue;
      const double nc = static_cast<double>(size[c]);
      const double upd = ((ni + nc) * dist(c, bi) + (nj + nc) * dist(c, bj) - nc * best) / (ni + nj + nc);
      dist(c, bi) = dist(bi, c) = std::max(upd, 0.0);
    }
    model.merges.push_back({std::min(node[bi], node[bj]), std::max(node[bi], node[bj]), std::sqrt(std::max(best, 0.0)),
                            size[bi] + size[bj]});
    node[bi] = n + m;
    size[bi] += size[bj];
    active[bj] = false;
  }

  model.cut_k = k;
  model.labels = cut_tree(n, model.merges, k);
  return model;
}

}  // namespace bioclust
