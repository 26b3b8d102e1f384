#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bioclust/agglomerative.hpp"
#include "bioclust/core.hpp"
#include "bioclust/evaluation.hpp"
#include "bioclust/features.hpp"
#include "bioclust/ingest.hpp"
#include "bioclust/kmeans.hpp"
#include "bioclust/windowing.hpp"

namespace bioclust {

enum class ClusterMethod { KMeans, Agglomerative };

inline std::string_view to_string(ClusterMethod m) { return m == ClusterMethod::KMeans ? "kmeans" : "agglo"; }

inline ClusterMethod parse_cluster_method(std::string_view s) {
  if (s == "kmeans") return ClusterMethod::KMeans;
  if (s == "agglo" || s == "agglomerative") return ClusterMethod::Agglomerative;
  throw InvalidArgument("unknown clustering method '" + std::string(s) + "' (expected kmeans or agglo)");
}

struct PipelineOptions {
  double window_s = 120.0;
  double stride_s = 30.0;
  int k = 4;
  ClusterMethod method = ClusterMethod::KMeans;
  MappingMethod mapping = MappingMethod::Majority;
  bool standardize = true;
  std::uint64_t seed = 42;
  KMeansOptions kmeans{};
};

struct WindowRow {
  std::string source;
  double start_s = 0.0;
  Label label = kClean;
  std::size_t start = 0;  // sample index, for waveform lookups
  std::size_t length = 0;
};

// Raw (unstandardized) feature matrix, one row per window, with the window
// metadata alongside.
struct FeatureTable {
  std::vector<WindowRow> rows;
  Matrix features{0, kNumFeatures};

  std::vector<Label> labels() const {
    std::vector<Label> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.label);
    return out;
  }
};

inline FeatureTable build_feature_table(const std::vector<SignalRecord>& records, double window_s, double stride_s,
                                        std::vector<std::string>* warnings = nullptr) {
  FeatureTable t;
  for (const auto& rec : records) {
    std::string warn;
    const auto windows = slide_windows(rec, window_s, stride_s, &warn);
    if (!warn.empty() && warnings) warnings->push_back(warn);
    for (const auto& w : windows) {
      const auto f = extract_features(w.view(rec), rec.fs).as_array();
      t.features.append_row(f);
      t.rows.push_back({rec.source_id, w.start_seconds(rec.fs), w.label, w.start, w.length});
    }
  }
  return t;
}

// Cluster means of each cluster in the given space.
inline Matrix cluster_means(const Matrix& X, const std::vector<int>& clusters, int k) {
  Matrix m(static_cast<std::size_t>(k), X.cols());
  std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto c = static_cast<std::size_t>(clusters[i]);
    ++counts[c];
    for (std::size_t j = 0; j < X.cols(); ++j) m(c, j) += X(i, j);
  }
  for (std::size_t c = 0; c < m.rows(); ++c)
    if (counts[c] > 0)
      for (std::size_t j = 0; j < X.cols(); ++j) m(c, j) /= static_cast<double>(counts[c]);
  return m;
}

// Fitted clustering in the (possibly standardized) feature space. For the
// agglomerative method the centroids are the cluster means of the cut.
struct ClusterModel {
  ClusterMethod method = ClusterMethod::KMeans;
  int k = 0;
  Matrix centroids;
  double inertia = 0.0;
  std::uint64_t seed = 0;
  bool standardized = true;
  Standardizer standardizer;
  std::vector<int> assignment;
  std::optional<KMeansModel> kmeans;
  std::optional<AgglomerativeModel> agglomerative;
};

inline ClusterModel fit_clusters(const Matrix& Z, const PipelineOptions& opt) {
  ClusterModel m;
  m.method = opt.method;
  m.k = opt.k;
  m.seed = opt.seed;
  if (opt.method == ClusterMethod::KMeans) {
    auto km = kmeans_fit(Z, opt.k, opt.seed, opt.kmeans);
    m.centroids = km.centroids;
    m.inertia = km.inertia;
    m.assignment = km.labels;
    m.kmeans = std::move(km);
  } else {
    auto ag = agglomerative_fit(Z, opt.k);
    m.assignment = ag.labels;
    m.centroids = cluster_means(Z, ag.labels, opt.k);
    m.inertia = inertia_of(Z, m.centroids, ag.labels);
    m.agglomerative = std::move(ag);
  }
  return m;
}

struct EvaluationReport {
  ConfusionMatrix confusion;
  ClassReport report;
};

struct EvaluationPair {
  EvaluationReport multiclass;
  EvaluationReport binary;
  ClusterLabelMap mapping;
};

// Map clusters to labels, then score the multi-class prediction over the
// classes present in truth or prediction, and the clean-vs-noisy collapse
// over {0, 1}.
inline EvaluationPair evaluate_clusters(const std::vector<Label>& truth, const std::vector<int>& clusters,
                                        MappingMethod mapping) {
  EvaluationPair out;
  out.mapping = map_clusters_to_labels(truth, clusters, mapping);
  const auto predicted = out.mapping.apply(clusters);
  out.multiclass.confusion = confusion(truth, predicted, present_classes(truth, predicted));
  out.multiclass.report = class_report(out.multiclass.confusion);
  out.binary.confusion = confusion(binary_collapse(truth), binary_collapse(predicted), {0, 1});
  out.binary.report = class_report(out.binary.confusion);
  return out;
}

struct PipelineResult {
  FeatureTable table;
  Matrix model_input;  // standardized features (or raw with standardize off)
  ClusterModel model;
  EvaluationPair evaluation;
  std::vector<std::string> warnings;
};

// windows -> features -> standardize -> cluster -> map -> both reports.
inline PipelineResult evaluate_pipeline(const std::vector<SignalRecord>& records, const PipelineOptions& opt) {
  if (records.empty()) throw InvalidArgument("evaluate_pipeline: no records");
  if (opt.k < 1) throw InvalidArgument("evaluate_pipeline: k must be >= 1");
  PipelineResult res;
  std::vector<SignalRecord> cleaned;
  cleaned.reserve(records.size());
  for (const auto& r : records) {
    validate(r);
    cleaned.push_back(drop_invalid(r));
  }
  res.table = build_feature_table(cleaned, opt.window_s, opt.stride_s, &res.warnings);
  if (res.table.rows.empty()) throw EmptyInput("no usable windows in the input recordings");
  if (static_cast<std::size_t>(opt.k) > res.table.rows.size())
    throw InvalidArgument("k = " + std::to_string(opt.k) + " exceeds the " + std::to_string(res.table.rows.size()) +
                          " available windows");

  Standardizer st;
  if (opt.standardize) {
    st = fit_standardizer(res.table.features);
    res.model_input = apply_standardizer(st, res.table.features);
  } else {
    st.mean.assign(kNumFeatures, 0.0);
    st.scale.assign(kNumFeatures, 1.0);
    res.model_input = res.table.features;
  }
  res.model = fit_clusters(res.model_input, opt);
  res.model.standardized = opt.standardize;
  res.model.standardizer = std::move(st);
  res.evaluation = evaluate_clusters(res.table.labels(), res.model.assignment, opt.mapping);
  return res;
}

}  // namespace bioclust
