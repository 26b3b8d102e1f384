#pragma once

// File formats: feature matrix CSV, cluster model JSON, report JSON, sweep and
// PCA CSVs, protocol config JSON. Requires nlohmann/json on the include path.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bioclust/core.hpp"
#include "bioclust/evaluation.hpp"
#include "bioclust/features.hpp"
#include "bioclust/ingest.hpp"
#include "bioclust/pca.hpp"
#include "bioclust/pipeline.hpp"
#include "bioclust/silhouette.hpp"
#include "bioclust/synthgen.hpp"

namespace bioclust::io {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Shortest decimal form that round-trips to the same double.
inline std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, p};
}

// Write to a sibling temp file, then rename over the target.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Feature matrix CSV
// ---------------------------------------------------------------------------

inline constexpr std::string_view kFeatureCsvHeader =
    "window_start_s,label,mean,variance,median,skewness,kurtosis,zcr,rms,total_power,highband_power";

inline std::string features_csv(const FeatureTable& t) {
  std::string out(kFeatureCsvHeader);
  out += '\n';
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out += fmt(t.rows[i].start_s);
    out += ',';
    out += std::to_string(t.rows[i].label);
    for (double v : t.features.row(i)) {
      out += ',';
      out += fmt(v);
    }
    out += '\n';
  }
  return out;
}

inline FeatureTable parse_features_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw EmptyInput("features file is empty");
  const auto header = detail::split_csv(line);
  const auto expected = detail::split_csv(kFeatureCsvHeader);
  if (header != expected) throw ParseError("features header must be: " + std::string(kFeatureCsvHeader), 0);
  FeatureTable t;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto cells = detail::split_csv(line);
    if (cells.size() != expected.size())
      throw ParseError("features row " + std::to_string(row) + ": expected " + std::to_string(expected.size()) + " cells",
                       row);
    WindowRow w;
    int label = 0;
    if (!detail::parse_double(cells[0], w.start_s) || !detail::parse_int(cells[1], label) || !is_valid_label(label))
      throw ParseError("features row " + std::to_string(row) + ": bad window_start_s or label", row);
    w.label = label;
    std::array<double, kNumFeatures> f{};
    for (std::size_t j = 0; j < kNumFeatures; ++j)
      if (!detail::parse_double(cells[2 + j], f[j]))
        throw ParseError("features row " + std::to_string(row) + ": non-numeric " + std::string(kFeatureNames[j]), row);
    t.rows.push_back(w);
    t.features.append_row(f);
  }
  if (t.rows.empty()) throw EmptyInput("features file has no rows");
  return t;
}

inline FeatureTable load_features_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse_features_csv(in);
}

// ---------------------------------------------------------------------------
// Cluster model JSON
// ---------------------------------------------------------------------------

inline json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  return rows;
}

inline ordered_json model_json(const ClusterModel& m) {
  ordered_json j;
  j["k"] = m.k;
  j["centroids"] = matrix_rows(m.centroids);
  j["inertia"] = m.inertia;
  j["seed"] = m.seed;
  j["method"] = std::string(to_string(m.method));
  j["standardized"] = m.standardized;
  j["standardizer"] = {{"mean", m.standardizer.mean}, {"scale", m.standardizer.scale}};
  j["feature_names"] = std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end());
  if (m.kmeans) j["iterations_run"] = m.kmeans->iterations_run;
  return j;
}

namespace schema {
template <typename T>
T require(const json& j, const char* field) {
  if (!j.contains(field)) throw SchemaError(std::string("model JSON: missing field '") + field + "'");
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("model JSON: field '") + field + "' has the wrong type");
  }
}
}  // namespace schema

inline ClusterModel parse_model_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model JSON: ") + e.what(), 0);
  }
  ClusterModel m;
  m.k = schema::require<int>(j, "k");
  const auto rows = schema::require<std::vector<std::vector<double>>>(j, "centroids");
  if (m.k < 1 || rows.size() != static_cast<std::size_t>(m.k))
    throw SchemaError("model JSON: field 'centroids' must have k rows");
  for (const auto& r : rows)
    if (r.size() != kNumFeatures)
      throw SchemaError("model JSON: field 'centroids' has rows of dimension " + std::to_string(r.size()) +
                        ", expected " + std::to_string(kNumFeatures));
  m.centroids = Matrix::from_rows(rows);
  m.inertia = schema::require<double>(j, "inertia");
  m.seed = schema::require<std::uint64_t>(j, "seed");
  if (j.contains("method")) m.method = parse_cluster_method(j["method"].get<std::string>());
  m.standardized = j.value("standardized", false);
  if (j.contains("standardizer")) {
    const auto& s = j["standardizer"];
    m.standardizer.mean = schema::require<std::vector<double>>(s, "mean");
    m.standardizer.scale = schema::require<std::vector<double>>(s, "scale");
    if (m.standardizer.mean.size() != kNumFeatures || m.standardizer.scale.size() != kNumFeatures)
      throw SchemaError("model JSON: field 'standardizer' must have 9 means and 9 scales");
  } else {
    m.standardizer.mean.assign(kNumFeatures, 0.0);
    m.standardizer.scale.assign(kNumFeatures, 1.0);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Evaluation report JSON
// ---------------------------------------------------------------------------

inline ordered_json report_json(const EvaluationReport& r) {
  ordered_json j;
  j["classes"] = r.confusion.classes;
  j["confusion_counts"] = r.confusion.counts;
  j["confusion_row_pct"] = r.confusion.row_percent();
  ordered_json per = ordered_json::array();
  for (const auto& m : r.report.per_class) {
    ordered_json c;
    c["label"] = m.label;
    c["precision"] = m.precision;
    c["recall"] = m.recall;
    c["f1"] = m.f1;
    c["support"] = m.support;
    if (m.precision_undefined || m.recall_undefined) {
      c["zero_division"] = ordered_json::array();
      if (m.precision_undefined) c["zero_division"].push_back("precision");
      if (m.recall_undefined) c["zero_division"].push_back("recall");
    }
    per.push_back(c);
  }
  j["per_class"] = per;
  j["accuracy"] = r.report.accuracy;
  j["macro_f1"] = r.report.macro_f1;
  j["weighted_f1"] = r.report.weighted_f1;
  return j;
}

inline ordered_json evaluation_json(const EvaluationPair& e, const ClusterModel& model) {
  ordered_json j;
  j["metadata"] = {{"method", std::string(to_string(model.method))},
                   {"k", model.k},
                   {"seed", model.seed},
                   {"standardized", model.standardized},
                   {"mapping", std::string(to_string(e.mapping.method))},
                   {"cluster_to_label", e.mapping.label_of},
                   {"kurtosis", "excess"}};
  j["multiclass"] = report_json(e.multiclass);
  j["binary"] = report_json(e.binary);
  return j;
}

inline std::string confusion_csv(const ConfusionMatrix& cm) {
  std::string out = "true\\pred";
  for (Label c : cm.classes) out += "," + std::to_string(c);
  out += '\n';
  for (std::size_t i = 0; i < cm.size(); ++i) {
    out += std::to_string(cm.classes[i]);
    for (auto v : cm.counts[i]) out += "," + std::to_string(v);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweep and PCA outputs
// ---------------------------------------------------------------------------

inline std::string sweep_csv(const SilhouetteSweep& s) {
  std::string out = "k,score\n";
  for (std::size_t i = 0; i < s.k_values.size(); ++i) out += std::to_string(s.k_values[i]) + "," + fmt(s.scores[i]) + "\n";
  return out;
}

inline SilhouetteSweep parse_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "k,score") throw ParseError("sweep CSV header must be k,score", 0);
  SilhouetteSweep s;
  double best = -2.0;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto cells = detail::split_csv(line);
    int k = 0;
    double v = 0.0;
    if (cells.size() != 2 || !detail::parse_int(cells[0], k) || !detail::parse_double(cells[1], v))
      throw ParseError("sweep CSV row " + std::to_string(row) + " malformed", row);
    s.k_values.push_back(k);
    s.scores.push_back(v);
    if (v > best) {
      best = v;
      s.best_k = k;
    }
  }
  return s;
}

inline std::string pca_scores_csv(const Matrix& scores, const std::vector<Label>& labels, const std::vector<int>& clusters) {
  std::string out = "pc1,pc2,label,cluster\n";
  for (std::size_t i = 0; i < scores.rows(); ++i)
    out += fmt(scores(i, 0)) + "," + fmt(scores.cols() > 1 ? scores(i, 1) : 0.0) + "," + std::to_string(labels[i]) + "," +
           std::to_string(clusters[i]) + "\n";
  return out;
}

inline ordered_json pca_json(const PcaModel& m) {
  ordered_json j;
  j["components"] = matrix_rows(m.components);
  j["explained_variance"] = m.explained_variance;
  j["explained_variance_ratio"] = m.explained_variance_ratio;
  j["column_means"] = m.column_means;
  j["feature_names"] = std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end());
  return j;
}

// ---------------------------------------------------------------------------
// Protocol config JSON
// ---------------------------------------------------------------------------

inline ordered_json protocol_json(const synth::ProtocolConfig& c) {
  ordered_json j;
  j["total_duration"] = c.total_duration;
  j["rest_duration"] = c.rest_duration;
  j["activity_duration"] = c.activity_duration;
  j["activity_sequence"] = c.activity_sequence;
  j["sampling_rate"] = c.sampling_rate;
  j["heart_rate"] = c.heart_rate;
  j["seed"] = c.seed;
  j["motion_amplitude_ratio"] = c.motion_amplitude_ratio;
  j["emg_amplitude_ratio"] = c.emg_amplitude_ratio;
  j["emg_band"] = {c.emg_band_lo, c.emg_band_hi};
  j["failure_mode"] = c.failure_mode == synth::FailureMode::Flatline ? "flatline" : "saturation";
  j["intensity_spread"] = c.intensity_spread;
  return j;
}

// Missing fields keep their defaults; unknown fields are rejected.
inline synth::ProtocolConfig parse_protocol_json(const json& j) {
  static const std::vector<std::string> known{"total_duration",      "rest_duration",        "activity_duration",
                                              "activity_sequence",   "sampling_rate",        "heart_rate",
                                              "seed",                "motion_amplitude_ratio", "emg_amplitude_ratio",
                                              "emg_band",            "failure_mode",         "intensity_spread"};
  if (!j.is_object()) throw SchemaError("protocol config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw SchemaError("protocol config: unknown field '" + key + "'");
  synth::ProtocolConfig c;
  try {
    c.total_duration = j.value("total_duration", c.total_duration);
    c.rest_duration = j.value("rest_duration", c.rest_duration);
    c.activity_duration = j.value("activity_duration", c.activity_duration);
    c.activity_sequence = j.value("activity_sequence", c.activity_sequence);
    c.sampling_rate = j.value("sampling_rate", c.sampling_rate);
    c.heart_rate = j.value("heart_rate", c.heart_rate);
    c.seed = j.value("seed", c.seed);
    c.motion_amplitude_ratio = j.value("motion_amplitude_ratio", c.motion_amplitude_ratio);
    c.emg_amplitude_ratio = j.value("emg_amplitude_ratio", c.emg_amplitude_ratio);
    c.intensity_spread = j.value("intensity_spread", c.intensity_spread);
    if (j.contains("emg_band")) {
      const auto band = j["emg_band"].get<std::vector<double>>();
      if (band.size() != 2) throw SchemaError("protocol config: emg_band must be [lo, hi]");
      c.emg_band_lo = band[0];
      c.emg_band_hi = band[1];
    }
    if (j.contains("failure_mode")) {
      const auto mode = j["failure_mode"].get<std::string>();
      if (mode == "flatline") c.failure_mode = synth::FailureMode::Flatline;
      else if (mode == "saturation") c.failure_mode = synth::FailureMode::Saturation;
      else throw SchemaError("protocol config: failure_mode must be flatline or saturation");
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("protocol config: ") + e.what());
  }
  synth::validate(c);
  return c;
}

}  // namespace bioclust::io
