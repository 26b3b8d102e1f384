#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bioclust/core.hpp"

namespace bioclust {

// Rows are true classes, columns predicted classes, both in `classes` order.
struct ConfusionMatrix {
  std::vector<Label> classes;
  std::vector<std::vector<std::int64_t>> counts;

  std::size_t size() const noexcept { return classes.size(); }
  std::int64_t total() const {
    std::int64_t t = 0;
    for (const auto& r : counts)
      for (auto c : r) t += c;
    return t;
  }
  std::int64_t row_sum(std::size_t i) const {
    std::int64_t s = 0;
    for (auto c : counts[i]) s += c;
    return s;
  }
  std::int64_t col_sum(std::size_t j) const {
    std::int64_t s = 0;
    for (const auto& r : counts) s += r[j];
    return s;
  }
  // Row-normalised percentages; an empty row stays all zero.
  std::vector<std::vector<double>> row_percent() const {
    std::vector<std::vector<double>> out(size(), std::vector<double>(size(), 0.0));
    for (std::size_t i = 0; i < size(); ++i) {
      const auto s = row_sum(i);
      if (s > 0)
        for (std::size_t j = 0; j < size(); ++j) out[i][j] = 100.0 * static_cast<double>(counts[i][j]) / static_cast<double>(s);
    }
    return out;
  }

  static ConfusionMatrix from_counts(std::vector<Label> classes, std::vector<std::vector<std::int64_t>> counts) {
    if (counts.size() != classes.size()) throw InvalidArgument("confusion counts/classes size mismatch");
    for (const auto& r : counts) {
      if (r.size() != classes.size()) throw InvalidArgument("confusion matrix must be square");
      for (auto c : r)
        if (c < 0) throw InvalidArgument("confusion counts must be non-negative");
    }
    return {std::move(classes), std::move(counts)};
  }
};

inline ConfusionMatrix confusion(const std::vector<Label>& truth, const std::vector<Label>& predicted,
                                 const std::vector<Label>& classes) {
  if (truth.size() != predicted.size()) throw InvalidArgument("confusion: label streams differ in length");
  std::map<Label, std::size_t> index;
  for (std::size_t i = 0; i < classes.size(); ++i) index[classes[i]] = i;
  ConfusionMatrix cm{classes, std::vector<std::vector<std::int64_t>>(classes.size(), std::vector<std::int64_t>(classes.size(), 0))};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = index.find(truth[i]), p = index.find(predicted[i]);
    if (t == index.end() || p == index.end())
      throw InvalidArgument("confusion: label " + std::to_string(t == index.end() ? truth[i] : predicted[i]) +
                            " is not among the classes");
    ++cm.counts[t->second][p->second];
  }
  return cm;
}

// Sorted union of the labels present in either stream.
inline std::vector<Label> present_classes(const std::vector<Label>& a, const std::vector<Label>& b) {
  std::set<Label> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

struct ClassMetrics {
  Label label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
  // Set when the corresponding denominator was zero and the score forced to 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
};

struct ClassReport {
  std::vector<ClassMetrics> per_class;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double weighted_f1 = 0.0;
};

inline double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

inline ClassReport class_report(const ConfusionMatrix& cm) {
  if (cm.size() == 0) throw InvalidArgument("class_report: empty confusion matrix");
  const auto total = cm.total();
  if (total == 0) throw InvalidArgument("class_report: confusion matrix has no counts");

  ClassReport rep;
  std::int64_t trace = 0;
  double f1_sum = 0.0, f1_weighted = 0.0;
  for (std::size_t j = 0; j < cm.size(); ++j) {
    ClassMetrics m;
    m.label = cm.classes[j];
    const auto tp = cm.counts[j][j];
    const auto col = cm.col_sum(j);
    m.support = cm.row_sum(j);
    m.precision_undefined = col == 0;
    m.recall_undefined = m.support == 0;
    m.precision = col > 0 ? static_cast<double>(tp) / static_cast<double>(col) : 0.0;
    m.recall = m.support > 0 ? static_cast<double>(tp) / static_cast<double>(m.support) : 0.0;
    m.f1 = f1_of(m.precision, m.recall);
    trace += tp;
    f1_sum += m.f1;
    f1_weighted += static_cast<double>(m.support) * m.f1;
    rep.per_class.push_back(m);
  }
  rep.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  rep.macro_f1 = f1_sum / static_cast<double>(cm.size());
  rep.weighted_f1 = f1_weighted / static_cast<double>(total);
  return rep;
}

inline std::vector<Label> binary_collapse(const std::vector<Label>& labels) {
  std::vector<Label> out(labels.size());
  std::transform(labels.begin(), labels.end(), out.begin(), [](Label l) { return l == kClean ? 0 : 1; });
  return out;
}

// Merge every noise class of a multi-class matrix into one "noisy" class.
// Requires class 0 to be present.
inline ConfusionMatrix collapse_matrix(const ConfusionMatrix& cm) {
  ConfusionMatrix out{{0, 1}, {{0, 0}, {0, 0}}};
  for (std::size_t i = 0; i < cm.size(); ++i)
    for (std::size_t j = 0; j < cm.size(); ++j)
      out.counts[cm.classes[i] == kClean ? 0 : 1][cm.classes[j] == kClean ? 0 : 1] += cm.counts[i][j];
  return out;
}

enum class MappingMethod { Majority, Optimal };

inline std::string_view to_string(MappingMethod m) { return m == MappingMethod::Majority ? "majority" : "optimal"; }

inline MappingMethod parse_mapping(std::string_view s) {
  if (s == "majority") return MappingMethod::Majority;
  if (s == "optimal") return MappingMethod::Optimal;
  throw InvalidArgument("unknown mapping '" + std::string(s) + "' (expected majority or optimal)");
}

struct ClusterLabelMap {
  std::vector<Label> label_of;  // index = cluster id
  MappingMethod method = MappingMethod::Majority;
  std::int64_t matched = 0;  // windows whose cluster maps to their true label

  Label operator()(int cluster) const { return label_of.at(static_cast<std::size_t>(cluster)); }
  std::vector<Label> apply(const std::vector<int>& clusters) const {
    std::vector<Label> out(clusters.size());
    for (std::size_t i = 0; i < clusters.size(); ++i) out[i] = (*this)(clusters[i]);
    return out;
  }
};

// majority: each cluster takes its modal true label (ties to the smaller
// label; an empty cluster maps to 0).
// optimal: exhaustive search over cluster->label maps that use each label at
// most once when k <= number of labels, or every label at least once when
// k > number of labels, maximising matched windows (ties to the
// lexicographically smallest map). Candidate labels are 0..3 plus any larger
// label that occurs.
inline ClusterLabelMap map_clusters_to_labels(const std::vector<Label>& truth, const std::vector<int>& clusters,
                                              MappingMethod method = MappingMethod::Majority) {
  if (truth.empty()) throw InvalidArgument("map_clusters_to_labels: empty input");
  if (truth.size() != clusters.size()) throw InvalidArgument("map_clusters_to_labels: length mismatch");
  int k = 0;
  Label max_label = kNumLabels - 1;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i] < 0) throw InvalidArgument("map_clusters_to_labels: negative cluster id");
    if (truth[i] < 0) throw InvalidArgument("map_clusters_to_labels: negative label");
    k = std::max(k, clusters[i] + 1);
    max_label = std::max(max_label, truth[i]);
  }
  const auto c = static_cast<std::size_t>(max_label) + 1;
  std::vector<std::vector<std::int64_t>> table(static_cast<std::size_t>(k), std::vector<std::int64_t>(c, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) ++table[static_cast<std::size_t>(clusters[i])][static_cast<std::size_t>(truth[i])];

  ClusterLabelMap map;
  map.method = method;
  map.label_of.assign(static_cast<std::size_t>(k), 0);

  if (method == MappingMethod::Majority) {
    for (std::size_t q = 0; q < table.size(); ++q) {
      const auto it = std::max_element(table[q].begin(), table[q].end());  // first max = smaller label
      map.label_of[q] = static_cast<Label>(it - table[q].begin());
      map.matched += *it;
    }
    return map;
  }

  if (k > 8) throw InvalidArgument("optimal mapping supports at most 8 clusters");
  const auto kk = static_cast<std::size_t>(k);
  std::vector<Label> cand(kk, 0);
  std::int64_t best = -1;
  // Odometer over c^k maps in lexicographic order.
  while (true) {
    std::vector<int> used(c, 0);
    for (Label l : cand) ++used[static_cast<std::size_t>(l)];
    bool ok = true;
    if (kk <= c) {
      for (int u : used) ok = ok && u <= 1;
    } else {
      for (int u : used) ok = ok && u >= 1;
    }
    if (ok) {
      std::int64_t score = 0;
      for (std::size_t q = 0; q < kk; ++q) score += table[q][static_cast<std::size_t>(cand[q])];
      if (score > best) {
        best = score;
        map.label_of = cand;
      }
    }
    std::size_t pos = kk;
    while (pos > 0) {
      --pos;
      if (static_cast<std::size_t>(++cand[pos]) < c) break;
      cand[pos] = 0;
      if (pos == 0) {
        pos = kk + 1;
        break;
      }
    }
    if (pos == kk + 1 || kk == 0) break;
  }
  map.matched = best;
  return map;
}

}  // namespace bioclust
