#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "bioclust/evaluation.hpp"

using namespace bioclust;

namespace {

// Label streams whose binary confusion matrix is `cm`.
void streams_from(const std::vector<std::vector<std::int64_t>>& cm, std::vector<Label>& truth, std::vector<Label>& pred) {
  for (std::size_t i = 0; i < cm.size(); ++i)
    for (std::size_t j = 0; j < cm.size(); ++j)
      for (std::int64_t c = 0; c < cm[i][j]; ++c) {
        truth.push_back(static_cast<Label>(i));
        pred.push_back(static_cast<Label>(j));
      }
}

// Best total over every cluster->label map satisfying the same constraint as
// the library, by recursion.
std::int64_t best_matched(const std::vector<Label>& truth, const std::vector<int>& clusters, int k, int c) {
  std::vector<std::vector<std::int64_t>> t(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(c), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) ++t[static_cast<std::size_t>(clusters[i])][static_cast<std::size_t>(truth[i])];
  std::int64_t best = -1;
  std::vector<int> map(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int q) -> void {
    if (q == k) {
      std::vector<int> used(static_cast<std::size_t>(c), 0);
      for (int l : map) ++used[static_cast<std::size_t>(l)];
      const bool ok = k <= c ? std::all_of(used.begin(), used.end(), [](int u) { return u <= 1; })
                             : std::all_of(used.begin(), used.end(), [](int u) { return u >= 1; });
      if (!ok) return;
      std::int64_t s = 0;
      for (int i = 0; i < k; ++i) s += t[static_cast<std::size_t>(i)][static_cast<std::size_t>(map[static_cast<std::size_t>(i)])];
      best = std::max(best, s);
      return;
    }
    for (int l = 0; l < c; ++l) {
      map[static_cast<std::size_t>(q)] = l;
      self(self, q + 1);
    }
  };
  rec(rec, 0);
  return best;
}

}  // namespace

TEST(Confusion, HandCountedBinary) {
  const auto cm = confusion({0, 0, 1}, {0, 1, 1}, {0, 1});
  EXPECT_EQ(cm.counts, (std::vector<std::vector<std::int64_t>>{{1, 1}, {0, 1}}));
}

TEST(Confusion, PerfectIsDiagonal) {
  const std::vector<Label> y{0, 1, 2, 3, 3, 2, 1, 0};
  const auto cm = confusion(y, y, {0, 1, 2, 3});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(cm.counts[i][j], i == j ? 2 : 0);
  EXPECT_THROW(confusion({0, 5}, {0, 1}, {0, 1}), InvalidArgument);
  EXPECT_THROW(confusion({0}, {0, 1}, {0, 1}), InvalidArgument);
}

TEST(ClassReport, TwoByTwoHand) {
  const auto r = class_report(ConfusionMatrix::from_counts({0, 1}, {{2, 1}, {0, 3}}));
  EXPECT_DOUBLE_EQ(r.per_class[0].precision, 1.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].precision, 0.75);
  EXPECT_DOUBLE_EQ(r.per_class[0].recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].recall, 1.0);
  EXPECT_NEAR(r.per_class[0].f1, 0.8, 1e-15);
  EXPECT_NEAR(r.per_class[1].f1, 6.0 / 7.0, 1e-15);
  EXPECT_NEAR(r.accuracy, 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.macro_f1, (0.8 + 6.0 / 7.0) / 2, 1e-15);
  EXPECT_NEAR(r.weighted_f1, (3 * 0.8 + 3 * 6.0 / 7.0) / 6, 1e-15);
}

TEST(ClassReport, PublishedEcgBinaryMatrix) {
  std::vector<Label> truth, pred;
  streams_from({{295, 5}, {96, 54}}, truth, pred);
  const auto cm = confusion(truth, pred, {0, 1});
  EXPECT_EQ(cm.counts, (std::vector<std::vector<std::int64_t>>{{295, 5}, {96, 54}}));
  const auto r = class_report(cm);
  EXPECT_NEAR(r.per_class[0].recall, 0.9833, 1e-4);
  EXPECT_NEAR(r.accuracy, 0.7756, 1e-4);
  EXPECT_NEAR(r.per_class[0].precision, 0.754, 1e-3);
}

TEST(ClassReport, PublishedPpgBinaryMatrix) {
  const auto r = class_report(ConfusionMatrix::from_counts({0, 1}, {{289, 11}, {89, 61}}));
  EXPECT_NEAR(r.per_class[0].recall, 0.9633, 1e-4);
}

TEST(ClassReport, IdentityFourByFour) {
  std::vector<std::vector<std::int64_t>> c(4, std::vector<std::int64_t>(4, 0));
  for (std::size_t i = 0; i < 4; ++i) c[i][i] = 3;
  const auto r = class_report(ConfusionMatrix::from_counts({0, 1, 2, 3}, c));
  for (const auto& m : r.per_class) {
    EXPECT_EQ(m.precision, 1.0);
    EXPECT_EQ(m.recall, 1.0);
    EXPECT_EQ(m.f1, 1.0);
    EXPECT_EQ(m.support, 3);
  }
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.macro_f1, 1.0);
  EXPECT_EQ(r.weighted_f1, 1.0);
}

TEST(ClassReport, ZeroDivisionIsFlagged) {
  const auto r = class_report(ConfusionMatrix::from_counts({0, 1, 2}, {{3, 0, 0}, {1, 0, 0}, {0, 0, 0}}));
  EXPECT_TRUE(r.per_class[1].precision_undefined);
  EXPECT_EQ(r.per_class[1].precision, 0.0);
  EXPECT_TRUE(r.per_class[2].recall_undefined);
  EXPECT_EQ(r.per_class[2].f1, 0.0);
  EXPECT_THROW(class_report(ConfusionMatrix::from_counts({0}, {{0}})), InvalidArgument);
}

TEST(ClassReport, Properties) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 5 + rng() % 100;
    std::vector<Label> truth(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) truth[i] = static_cast<Label>(rng() % 4), pred[i] = static_cast<Label>(rng() % 4);
    const auto classes = present_classes(truth, pred);
    const auto cm = confusion(truth, pred, classes);
    const auto r = class_report(cm);
    EXPECT_EQ(cm.total(), static_cast<std::int64_t>(n));
    double lo = 1, hi = 0;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      EXPECT_EQ(cm.row_sum(i), std::count(truth.begin(), truth.end(), classes[i]));
      lo = std::min(lo, r.per_class[i].f1);
      hi = std::max(hi, r.per_class[i].f1);
      EXPECT_EQ(r.per_class[i].f1 == 0.0, cm.counts[i][i] == 0);
    }
    EXPECT_GE(r.macro_f1, lo - 1e-15);
    EXPECT_LE(r.macro_f1, hi + 1e-15);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Label> pt(n), pp(n);
    for (std::size_t i = 0; i < n; ++i) pt[i] = truth[perm[i]], pp[i] = pred[perm[i]];
    const auto r2 = class_report(confusion(pt, pp, classes));
    EXPECT_EQ(r2.accuracy, r.accuracy);
    EXPECT_EQ(r2.macro_f1, r.macro_f1);
    EXPECT_EQ(r2.weighted_f1, r.weighted_f1);

    if (std::find(classes.begin(), classes.end(), 0) != classes.end()) {
      const auto collapsed = class_report(collapse_matrix(cm));
      const auto direct = class_report(confusion(binary_collapse(truth), binary_collapse(pred), {0, 1}));
      EXPECT_DOUBLE_EQ(collapsed.accuracy, direct.accuracy);
    }
  }
}

TEST(BinaryCollapse, Basics) {
  EXPECT_EQ(binary_collapse({0, 1, 2, 3}), (std::vector<Label>{0, 1, 1, 1}));
  EXPECT_EQ(binary_collapse({0, 0, 0}), (std::vector<Label>{0, 0, 0}));
  const std::vector<Label> y{0, 3, 0, 2, 1, 0};
  const auto b = binary_collapse(y);
  EXPECT_EQ(std::count(b.begin(), b.end(), 0), std::count(y.begin(), y.end(), 0));
}

TEST(Mapping, MajorityOfMembers) {
  const auto m = map_clusters_to_labels({0, 0, 1}, {0, 0, 0});
  EXPECT_EQ(m(0), 0);
}

TEST(Mapping, AlignedClustersGiveIdentity) {
  const std::vector<Label> y{0, 1, 2, 3, 0, 1, 2, 3};
  const std::vector<int> c{0, 1, 2, 3, 0, 1, 2, 3};
  for (auto method : {MappingMethod::Majority, MappingMethod::Optimal})
    EXPECT_EQ(map_clusters_to_labels(y, c, method).label_of, (std::vector<Label>{0, 1, 2, 3}));
}

TEST(Mapping, MethodsDifferOnContrivedCase) {
  // cluster 0: 5 clean, 1 motion; cluster 1: 3 clean, 2 motion
  const std::vector<Label> y{0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1};
  const std::vector<int> c{0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  const auto maj = map_clusters_to_labels(y, c, MappingMethod::Majority);
  const auto opt = map_clusters_to_labels(y, c, MappingMethod::Optimal);
  EXPECT_EQ(maj.label_of, (std::vector<Label>{0, 0}));
  EXPECT_EQ(opt.label_of, (std::vector<Label>{0, 1}));
  EXPECT_EQ(opt.matched, best_matched(y, c, 2, 4));
  EXPECT_EQ(maj.matched, 8);
  EXPECT_EQ(opt.matched, 7);
  EXPECT_NE(maj.label_of, opt.label_of);
}

TEST(Mapping, OptimalMatchesExhaustiveOracle) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 60; ++t) {
    const int k = 2 + static_cast<int>(rng() % 5);
    const std::size_t n = 20 + rng() % 40;
    std::vector<Label> y(n);
    std::vector<int> c(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<Label>(rng() % 4), c[i] = static_cast<int>(rng() % k);
    c[0] = k - 1;
    const auto m = map_clusters_to_labels(y, c, MappingMethod::Optimal);
    EXPECT_EQ(m.matched, best_matched(y, c, k, 4));
    std::int64_t check = 0;
    for (std::size_t i = 0; i < n; ++i) check += m(c[i]) == y[i];
    EXPECT_EQ(check, m.matched);
  }
}

TEST(Mapping, Errors) {
  EXPECT_THROW(map_clusters_to_labels({}, {}), InvalidArgument);
  EXPECT_THROW(map_clusters_to_labels({0}, {0, 1}), InvalidArgument);
  EXPECT_THROW(parse_mapping("best"), InvalidArgument);
}
