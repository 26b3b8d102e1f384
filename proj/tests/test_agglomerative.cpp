#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bioclust/agglomerative.hpp"
#include "oracles.hpp"

using namespace bioclust;

namespace {

// Ward heights by recomputing every cluster pair's merge cost from scratch.
std::vector<double> naive_ward_heights(const Matrix& X) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < X.rows(); ++i) clusters.push_back({i});
  auto centroid = [&](const std::vector<std::size_t>& c) {
    std::vector<double> mu(X.cols(), 0.0);
    for (auto i : c)
      for (std::size_t j = 0; j < X.cols(); ++j) mu[j] += X(i, j) / static_cast<double>(c.size());
    return mu;
  };
  std::vector<double> heights;
  while (clusters.size() > 1) {
    double best = INFINITY;
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        const double na = static_cast<double>(clusters[a].size()), nb = static_cast<double>(clusters[b].size());
        const double cost = 2.0 * na * nb / (na + nb) * squared_distance(centroid(clusters[a]), centroid(clusters[b]));
        if (cost < best) best = cost, ba = a, bb = b;
      }
    heights.push_back(std::sqrt(best));
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  return heights;
}

}  // namespace

TEST(Agglomerative, TwoPoints) {
  const auto m = agglomerative_fit(Matrix::from_rows({{0, 0}, {3, 4}}), 1);
  ASSERT_EQ(m.merges.size(), 1u);
  EXPECT_EQ(m.merges[0].left, 0u);
  EXPECT_EQ(m.merges[0].right, 1u);
  EXPECT_DOUBLE_EQ(m.merges[0].cost, 5.0);
  EXPECT_EQ(m.labels, (std::vector<int>{0, 0}));
}

TEST(Agglomerative, FourPoints) {
  const auto m = agglomerative_fit(Matrix::from_rows({{0}, {1}, {10}, {11}}), 2);
  EXPECT_EQ(m.labels, (std::vector<int>{0, 0, 1, 1}));
  ASSERT_EQ(m.merges.size(), 3u);
  EXPECT_DOUBLE_EQ(m.merges[0].cost, 1.0);
  EXPECT_DOUBLE_EQ(m.merges[1].cost, 1.0);
  EXPECT_EQ(m.merges[2].size, 4u);
  // sqrt(2 * (2*2/4) * 10^2)
  EXPECT_NEAR(m.merges[2].cost, std::sqrt(200.0), 1e-12);
}

TEST(Agglomerative, KEqualsNIsAllSingletons) {
  std::mt19937_64 rng(1);
  const auto m = agglomerative_fit(oracle::random_matrix(7, 2, rng), 7);
  EXPECT_EQ(m.labels, (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
}

TEST(Agglomerative, MatchesNaiveWardAndCutsExactlyK) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 3 + rng() % 15;
    const auto X = oracle::random_matrix(n, 2, rng);
    const auto m = agglomerative_fit(X, 1);
    const auto naive = naive_ward_heights(X);
    ASSERT_EQ(m.merges.size(), n - 1);
    for (std::size_t i = 0; i < naive.size(); ++i) EXPECT_NEAR(m.merges[i].cost, naive[i], 1e-9);
    for (std::size_t i = 1; i < m.merges.size(); ++i) EXPECT_GE(m.merges[i].cost, m.merges[i - 1].cost - 1e-12);
    for (int k = 1; k <= static_cast<int>(n); ++k) {
      const auto labels = cut_tree(n, m.merges, k);
      EXPECT_EQ(std::set<int>(labels.begin(), labels.end()).size(), static_cast<std::size_t>(k));
    }
  }
}

TEST(Agglomerative, Errors) {
  const auto X = Matrix::from_rows({{0}, {1}});
  EXPECT_THROW(agglomerative_fit(X, 0), InvalidArgument);
  EXPECT_THROW(agglomerative_fit(X, 3), InvalidArgument);
}
