#pragma once

// Command-line front end. Requires CLI11 and nlohmann/json on the include path.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bioclust/io.hpp"
#include "bioclust/pca.hpp"
#include "bioclust/pipeline.hpp"
#include "bioclust/silhouette.hpp"
#include "bioclust/svg.hpp"
#include "bioclust/synthgen.hpp"

namespace bioclust::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInternal = 4;

struct StageError : std::runtime_error {
  std::string stage;
  int code;
  StageError(std::string stage_, int code_, const std::string& what)
      : std::runtime_error(what), stage(std::move(stage_)), code(code_) {}
};

// Runs `f`, translating library errors into a StageError tagged with the
// stage name and the exit code for its category.
template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw StageError(name, kExitConfig, e.what());
  } catch (const ParseError& e) {
    throw StageError(name, kExitData, e.what());
  } catch (const SchemaError& e) {
    throw StageError(name, kExitData, e.what());
  } catch (const EmptyInput& e) {
    throw StageError(name, kExitData, e.what());
  } catch (const RangeError& e) {
    throw StageError(name, kExitData, e.what());
  } catch (const fs::filesystem_error& e) {
    throw StageError(name, kExitData, e.what());
  } catch (const std::exception& e) {
    throw StageError(name, kExitInternal, e.what());
  }
}

struct KRange {
  int lo = 2, hi = 10;
};

inline KRange parse_k_range(const std::string& s) {
  const auto colon = s.find(':');
  int lo = 0, hi = 0;
  if (colon == std::string::npos || !detail::parse_int(s.substr(0, colon), lo) ||
      !detail::parse_int(s.substr(colon + 1), hi))
    throw InvalidArgument("--k-sweep expects A:B, got '" + s + "'");
  if (lo < 2 || hi < lo) throw InvalidArgument("--k-sweep needs 2 <= A <= B, got '" + s + "'");
  return {lo, hi};
}

struct Config {
  std::vector<std::string> inputs;
  std::optional<std::string> synth_config;  // path or "default"
  std::optional<Modality> modality;
  double fs = 1000.0;
  double window_s = 120.0;
  double stride_s = 30.0;
  int k = 4;
  KRange k_sweep{};
  bool k_sweep_given = false;
  ClusterMethod method = ClusterMethod::KMeans;
  MappingMethod mapping = MappingMethod::Majority;
  bool standardize = true;
  std::uint64_t seed = 42;
  int sessions = 4;
  std::string model;
  std::string out = "out";

  PipelineOptions pipeline_options() const {
    PipelineOptions o;
    o.window_s = window_s;
    o.stride_s = stride_s;
    o.k = k;
    o.method = method;
    o.mapping = mapping;
    o.standardize = standardize;
    o.seed = seed;
    return o;
  }
};

// Raw command-line values; applied over the JSON config only when given.
struct Flags {
  std::vector<std::string> inputs;
  std::string synth_config, modality, k_sweep, method, mapping, model, out, config;
  double fs = 0, window_s = 0, stride_s = 0;
  int k = 0, sessions = 0;
  std::uint64_t seed = 0;
  bool no_standardize = false;
};

// Fields of a JSON run config; names mirror the long flags.
inline void apply_json(Config& c, const json& j, bool& seed_set) {
  static const std::vector<std::string> known{"input",  "synth_config", "modality", "fs",      "window_s",
                                              "stride_s", "k",          "k_sweep",  "method",  "mapping",
                                              "standardize", "seed",    "sessions", "model",   "out"};
  if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InvalidArgument("config file: unknown field '" + key + "'");
  try {
    if (j.contains("input")) {
      if (j["input"].is_string()) c.inputs = {j["input"].get<std::string>()};
      else c.inputs = j["input"].get<std::vector<std::string>>();
    }
    if (j.contains("synth_config")) c.synth_config = j["synth_config"].get<std::string>();
    if (j.contains("modality")) c.modality = parse_modality(j["modality"].get<std::string>());
    c.fs = j.value("fs", c.fs);
    c.window_s = j.value("window_s", c.window_s);
    c.stride_s = j.value("stride_s", c.stride_s);
    c.k = j.value("k", c.k);
    if (j.contains("k_sweep")) {
      c.k_sweep = parse_k_range(j["k_sweep"].get<std::string>());
      c.k_sweep_given = true;
    }
    if (j.contains("method")) c.method = parse_cluster_method(j["method"].get<std::string>());
    if (j.contains("mapping")) c.mapping = parse_mapping(j["mapping"].get<std::string>());
    c.standardize = j.value("standardize", c.standardize);
    if (j.contains("seed")) {
      c.seed = j["seed"].get<std::uint64_t>();
      seed_set = true;
    }
    c.sessions = j.value("sessions", c.sessions);
    c.model = j.value("model", c.model);
    c.out = j.value("out", c.out);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config file: ") + e.what());
  }
}

inline bool given(const CLI::App& sub, const std::string& name) {
  const auto* o = sub.get_option_no_throw(name);
  return o && o->count() > 0;
}

inline Config resolve(const CLI::App& sub, const Flags& f) {
  Config c;
  bool seed_set = false;
  if (given(sub, "--config")) {
    json j;
    try {
      j = json::parse(io::read_file(f.config));
    } catch (const json::parse_error& e) {
      throw InvalidArgument(std::string("config file: ") + e.what());
    } catch (const ParseError& e) {
      throw InvalidArgument(e.what());
    }
    apply_json(c, j, seed_set);
  }
  if (given(sub, "--input")) c.inputs = f.inputs;
  if (given(sub, "--synth-config")) c.synth_config = f.synth_config;
  if (given(sub, "--modality")) c.modality = parse_modality(f.modality);
  if (given(sub, "--fs")) c.fs = f.fs;
  if (given(sub, "--window-s")) c.window_s = f.window_s;
  if (given(sub, "--stride-s")) c.stride_s = f.stride_s;
  if (given(sub, "--k")) c.k = f.k;
  if (given(sub, "--k-sweep")) {
    c.k_sweep = parse_k_range(f.k_sweep);
    c.k_sweep_given = true;
  }
  if (given(sub, "--method")) c.method = parse_cluster_method(f.method);
  if (given(sub, "--mapping")) c.mapping = parse_mapping(f.mapping);
  if (given(sub, "--no-standardize")) c.standardize = false;
  if (given(sub, "--sessions")) c.sessions = f.sessions;
  if (given(sub, "--model")) c.model = f.model;
  if (given(sub, "--out")) c.out = f.out;
  if (given(sub, "--seed")) {
    c.seed = f.seed;
  } else if (!seed_set) {
    if (const char* env = std::getenv("BIOCLUST_SEED")) {
      std::uint64_t s = 0;
      const std::string_view v(env);
      const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
      if (ec != std::errc() || p != v.data() + v.size())
        throw InvalidArgument("BIOCLUST_SEED must be a non-negative integer, got '" + std::string(v) + "'");
      c.seed = s;
    }
  }
  if (c.fs <= 0) throw InvalidArgument("--fs must be positive");
  if (c.sessions < 1) throw InvalidArgument("--sessions must be >= 1");
  return c;
}

// ---------------------------------------------------------------------------
// Shared stages
// ---------------------------------------------------------------------------

struct SynthSource {
  synth::ProtocolConfig protocol;
  bool seed_from_file = false;
};

inline SynthSource load_protocol(const Config& c) {
  SynthSource s;
  if (*c.synth_config != "default") {
    json j;
    try {
      j = json::parse(io::read_file(*c.synth_config));
    } catch (const json::parse_error& e) {
      throw InvalidArgument(std::string("synth config: ") + e.what());
    } catch (const ParseError& e) {
      throw InvalidArgument(e.what());
    }
    try {
      s.protocol = io::parse_protocol_json(j);
    } catch (const SchemaError& e) {
      throw InvalidArgument(e.what());
    }
    s.seed_from_file = j.contains("seed");
  }
  if (!s.seed_from_file) s.protocol.seed = c.seed;
  if (*c.synth_config == "default") s.protocol.sampling_rate = c.fs;
  return s;
}

// Session i of a synthetic run uses protocol seed + i.
inline std::vector<synth::ProtocolConfig> session_configs(const SynthSource& s, int sessions) {
  std::vector<synth::ProtocolConfig> out;
  for (int i = 0; i < sessions; ++i) {
    auto p = s.protocol;
    p.seed = s.protocol.seed + static_cast<std::uint64_t>(i);
    out.push_back(p);
  }
  return out;
}

inline void require_one_source(const Config& c) {
  if (c.inputs.empty() == !c.synth_config.has_value())
    throw InvalidArgument("give exactly one of --input or --synth-config");
}

inline std::vector<SignalRecord> load_records(const Config& c) {
  require_one_source(c);
  const Modality mod = c.modality.value_or(Modality::Ecg);
  std::vector<SignalRecord> recs;
  if (c.synth_config) {
    const auto src = load_protocol(c);
    for (const auto& p : session_configs(src, c.sessions)) recs.push_back(synth::generate_protocol_recording(p, mod));
  } else {
    for (const auto& path : c.inputs) recs.push_back(load_recording(path, c.fs, mod));
  }
  return recs;
}

inline FeatureTable load_feature_input(const Config& c) {
  if (c.inputs.size() != 1) throw InvalidArgument("--input must name exactly one features CSV");
  return io::load_features_csv(c.inputs.front());
}

inline Matrix standardized(const FeatureTable& t, bool on, Standardizer* out = nullptr) {
  if (!on) {
    if (out) {
      out->mean.assign(kNumFeatures, 0.0);
      out->scale.assign(kNumFeatures, 1.0);
    }
    return t.features;
  }
  auto st = fit_standardizer(t.features);
  auto z = apply_standardizer(st, t.features);
  if (out) *out = std::move(st);
  return z;
}

inline std::vector<std::string> class_names(const std::vector<Label>& classes, bool binary) {
  std::vector<std::string> out;
  for (Label l : classes) out.push_back(binary ? (l == 0 ? "clean" : "noisy") : std::string(label_name(l)));
  return out;
}

inline std::string clusters_csv(const FeatureTable& t, const std::vector<int>& clusters) {
  std::string out = "window_start_s,label,cluster\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    out += io::fmt(t.rows[i].start_s) + "," + std::to_string(t.rows[i].label) + "," + std::to_string(clusters[i]) + "\n";
  return out;
}

inline void write_sweep(const fs::path& dir, const SilhouetteSweep& s) {
  io::write_file_atomic(dir / "silhouette.csv", io::sweep_csv(s));
  std::vector<double> ks(s.k_values.begin(), s.k_values.end());
  io::write_file_atomic(dir / "silhouette.svg", svg::line_plot(ks, s.scores, "Silhouette score by cluster count",
                                                                "k", "mean silhouette", s.best_k));
}

inline void write_pca(const fs::path& dir, const PcaModel& m, const Matrix& scores, const std::vector<Label>& labels,
                      const std::vector<int>& clusters) {
  io::write_file_atomic(dir / "pca_scores.csv", io::pca_scores_csv(scores, labels, clusters));
  io::write_file_atomic(dir / "pca_model.json", io::pca_json(m).dump(2) + "\n");
  std::vector<double> xs, ys;
  std::vector<int> groups(labels.begin(), labels.end());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    xs.push_back(scores(i, 0));
    ys.push_back(scores.cols() > 1 ? scores(i, 1) : 0.0);
  }
  std::vector<std::string> names;
  for (Label l = 0; l < kNumLabels; ++l) names.emplace_back(label_name(l));
  char title[96];
  std::snprintf(title, sizeof title, "PCA of window features (PC1 %.1f%%, PC2 %.1f%%)",
                100.0 * m.explained_variance_ratio[0],
                m.explained_variance_ratio.size() > 1 ? 100.0 * m.explained_variance_ratio[1] : 0.0);
  io::write_file_atomic(dir / "pca_scatter.svg", svg::scatter(xs, ys, groups, names, title, "PC1", "PC2"));
}

inline void write_evaluation(const fs::path& dir, const EvaluationPair& e, const ClusterModel& model, bool plots) {
  io::write_file_atomic(dir / "report.json", io::evaluation_json(e, model).dump(2) + "\n");
  io::write_file_atomic(dir / "confusion_multiclass.csv", io::confusion_csv(e.multiclass.confusion));
  io::write_file_atomic(dir / "confusion_binary.csv", io::confusion_csv(e.binary.confusion));
  if (!plots) return;
  const auto& mc = e.multiclass.confusion;
  const auto& bc = e.binary.confusion;
  io::write_file_atomic(dir / "confusion_multiclass.svg",
                        svg::heatmap(mc.counts, mc.row_percent(), class_names(mc.classes, false),
                                     "Multi-class confusion (rows: true)"));
  io::write_file_atomic(dir / "confusion_binary.svg",
                        svg::heatmap(bc.counts, bc.row_percent(), class_names(bc.classes, true),
                                     "Clean vs noisy confusion (rows: true)"));
}

// Per cluster: the member window closest to the centroid (first 10 s) and the
// sample-wise mean over all members of that same leading span.
inline std::vector<fs::path> write_waveforms(const fs::path& dir, const std::vector<SignalRecord>& records,
                                             const PipelineResult& r) {
  std::map<std::string, const SignalRecord*> by_source;
  for (const auto& rec : records) by_source.emplace(rec.source_id, &rec);
  std::vector<fs::path> written;
  const auto& model = r.model;
  for (int c = 0; c < model.k; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < model.assignment.size(); ++i)
      if (model.assignment[i] == c) members.push_back(i);
    if (members.empty()) continue;
    std::size_t best = members.front();
    double best_d = INFINITY;
    for (auto i : members) {
      const double d = squared_distance(r.model_input.row(i), model.centroids.row(static_cast<std::size_t>(c)));
      if (d < best_d) best_d = d, best = i;
    }
    const auto* rec = by_source.at(r.table.rows[best].source);
    const std::size_t span = std::min<std::size_t>(r.table.rows[best].length,
                                                   static_cast<std::size_t>(std::llround(10.0 * rec->fs)));
    const std::size_t step = std::max<std::size_t>(1, span / 2000);
    svg::Series rep{"nearest to centroid", {}}, mean{"cluster mean", {}};
    std::vector<double> acc(span, 0.0);
    for (auto i : members) {
      const auto* ri = by_source.at(r.table.rows[i].source);
      for (std::size_t s = 0; s < span; ++s) acc[s] += ri->samples[r.table.rows[i].start + s];
    }
    for (std::size_t s = 0; s < span; s += step) {
      rep.y.push_back(rec->samples[r.table.rows[best].start + s]);
      mean.y.push_back(acc[s] / static_cast<double>(members.size()));
    }
    const Label mapped = r.evaluation.mapping(c);
    const std::string title = "Cluster " + std::to_string(c) + " (" + std::to_string(members.size()) +
                              " windows, mapped to " + std::string(label_name(mapped)) + ")";
    const auto path = dir / ("waveform_cluster_" + std::to_string(c) + ".svg");
    io::write_file_atomic(path, svg::waveform({rep, mean}, static_cast<double>(step) / rec->fs, title));
    written.push_back(path);
  }
  return written;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline int cmd_synth(const Config& c, std::ostream& log) {
  const auto src = stage("config", [&] {
    if (!c.inputs.empty()) throw InvalidArgument("synth does not read --input");
    Config cc = c;
    if (!cc.synth_config) cc.synth_config = "default";
    return load_protocol(cc);
  });
  const fs::path dir = c.out;
  std::vector<Modality> mods;
  if (c.modality) mods = {*c.modality};
  else mods = {Modality::Ecg, Modality::Ppg};

  ordered_json manifest;
  manifest["protocol"] = io::protocol_json(src.protocol);
  manifest["sessions"] = ordered_json::array();
  for (const auto& p : session_configs(src, c.sessions)) {
    ordered_json s;
    s["seed"] = p.seed;
    s["files"] = ordered_json::array();
    for (Modality m : mods) {
      const auto rec = stage("synth", [&] { return synth::generate_protocol_recording(p, m); });
      const std::string name = c.sessions == 1 ? std::string(to_string(m)) + ".csv"
                                               : std::string(to_string(m)) + "_seed" + std::to_string(p.seed) + ".csv";
      stage("write", [&] {
        std::ostringstream os;
        write_recording(os, rec);
        io::write_file_atomic(dir / name, os.str());
      });
      s["files"].push_back(name);
    }
    ordered_json slots = ordered_json::array();
    for (const auto& sl : synth::activity_slots(p))
      slots.push_back({{"start_s", sl.start_s}, {"end_s", sl.end_s}, {"label", sl.label},
                       {"class", std::string(label_name(sl.label))}});
    s["activity_slots"] = slots;
    manifest["sessions"].push_back(s);
  }
  stage("write", [&] { io::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n"); });
  log << "synth: wrote " << c.sessions * static_cast<int>(mods.size()) << " recording(s) to " << dir.string() << "\n";
  return kExitOk;
}

inline int cmd_features(const Config& c, std::ostream& log) {
  const auto records = stage("ingest", [&] { return load_records(c); });
  std::vector<std::string> warnings;
  const auto table = stage("features", [&] {
    std::vector<SignalRecord> cleaned;
    for (const auto& r : records) {
      validate(r);
      cleaned.push_back(drop_invalid(r));
    }
    auto t = build_feature_table(cleaned, c.window_s, c.stride_s, &warnings);
    if (t.rows.empty()) throw EmptyInput("no usable windows in the input recordings");
    return t;
  });
  for (const auto& w : warnings) log << "warning: " << w << "\n";
  stage("write", [&] { io::write_file_atomic(fs::path(c.out) / "features.csv", io::features_csv(table)); });
  log << "features: " << table.rows.size() << " windows\n";
  return kExitOk;
}

inline int cmd_cluster(const Config& c, std::ostream& log) {
  const auto table = stage("ingest", [&] { return load_feature_input(c); });
  stage("config", [&] {
    if (c.k < 2) throw InvalidArgument("--k must be >= 2");
  });
  const auto model = stage("cluster", [&] {
    Standardizer st;
    const auto z = standardized(table, c.standardize, &st);
    auto m = fit_clusters(z, c.pipeline_options());
    m.standardized = c.standardize;
    m.standardizer = st;
    return m;
  });
  stage("write", [&] {
    io::write_file_atomic(fs::path(c.out) / "model.json", io::model_json(model).dump(2) + "\n");
    io::write_file_atomic(fs::path(c.out) / "clusters.csv", clusters_csv(table, model.assignment));
  });
  log << "cluster: k = " << model.k << ", inertia = " << io::fmt(model.inertia) << "\n";
  return kExitOk;
}

inline SilhouetteSweep run_sweep(const Matrix& z, KRange r, std::uint64_t seed) {
  if (static_cast<std::size_t>(r.hi) + 1 > z.rows())
    throw InvalidArgument("k-sweep upper bound " + std::to_string(r.hi) + " needs at least " + std::to_string(r.hi + 1) +
                          " windows, have " + std::to_string(z.rows()));
  return silhouette_sweep(z, r.lo, r.hi, seed);
}

inline int cmd_sweep(const Config& c, std::ostream& log) {
  const auto table = stage("ingest", [&] { return load_feature_input(c); });
  const auto sweep = stage("sweep", [&] { return run_sweep(standardized(table, c.standardize), c.k_sweep, c.seed); });
  stage("write", [&] { write_sweep(c.out, sweep); });
  log << "sweep: best k = " << sweep.best_k << "\n";
  return kExitOk;
}

inline int cmd_pca(const Config& c, std::ostream& log) {
  const auto table = stage("ingest", [&] { return load_feature_input(c); });
  std::optional<ClusterModel> model;
  if (!c.model.empty()) model = stage("ingest", [&] { return io::parse_model_json(io::read_file(c.model)); });
  stage("pca", [&] {
    Matrix z = model ? apply_standardizer(model->standardizer, table.features) : standardized(table, c.standardize);
    const auto m = pca_fit(z, 2);
    const auto scores = pca_transform(m, z);
    std::vector<int> clusters(table.rows.size(), -1);
    if (model) clusters = kmeans_assign(z, model->centroids);
    stage("write", [&] { write_pca(c.out, m, scores, table.labels(), clusters); });
    log << "pca: explained variance ratio " << io::fmt(m.explained_variance_ratio[0]) << ", "
        << io::fmt(m.explained_variance_ratio[1]) << "\n";
  });
  return kExitOk;
}

// Assigns each window to its nearest model centroid in the model's space.
inline int cmd_evaluate(const Config& c, std::ostream& log) {
  const auto table = stage("ingest", [&] { return load_feature_input(c); });
  const auto model = stage("ingest", [&] {
    if (c.model.empty()) throw InvalidArgument("evaluate needs --model");
    return io::parse_model_json(io::read_file(c.model));
  });
  const auto e = stage("evaluate", [&] {
    const auto z = apply_standardizer(model.standardizer, table.features);
    return evaluate_clusters(table.labels(), kmeans_assign(z, model.centroids), c.mapping);
  });
  stage("write", [&] { write_evaluation(c.out, e, model, false); });
  log << "evaluate: binary accuracy " << io::fmt(e.binary.report.accuracy) << "\n";
  return kExitOk;
}

inline int cmd_pipeline(const Config& c, std::ostream& log) {
  stage("config", [&] {
    require_one_source(c);
    if (c.k < 2) throw InvalidArgument("--k must be >= 2");
  });
  const auto records = stage("ingest", [&] { return load_records(c); });
  const auto res = stage("cluster", [&] { return evaluate_pipeline(records, c.pipeline_options()); });
  for (const auto& w : res.warnings) log << "warning: " << w << "\n";

  KRange range = c.k_sweep;
  const int cap = static_cast<int>(res.table.rows.size()) - 1;
  if (!c.k_sweep_given && range.hi > cap) {
    range.hi = cap;
    log << "warning: k-sweep capped at " << cap << " for " << res.table.rows.size() << " windows\n";
  }
  const auto sweep = stage("sweep", [&] {
    if (range.hi < range.lo) throw InvalidArgument("too few windows for a silhouette sweep");
    return run_sweep(res.model_input, range, c.seed);
  });
  const auto pca = stage("pca", [&] { return pca_fit(res.model_input, 2); });
  const auto scores = pca_transform(pca, res.model_input);

  const fs::path dir = c.out;
  stage("write", [&] {
    io::write_file_atomic(dir / "features.csv", io::features_csv(res.table));
    io::write_file_atomic(dir / "model.json", io::model_json(res.model).dump(2) + "\n");
    io::write_file_atomic(dir / "clusters.csv", clusters_csv(res.table, res.model.assignment));
    write_sweep(dir, sweep);
    write_pca(dir, pca, scores, res.table.labels(), res.model.assignment);
    write_evaluation(dir, res.evaluation, res.model, true);
    write_waveforms(dir, records, res);

    ordered_json summary;
    summary["windows"] = res.table.rows.size();
    summary["recordings"] = records.size();
    summary["window_s"] = c.window_s;
    summary["stride_s"] = c.stride_s;
    summary["k"] = c.k;
    summary["silhouette_best_k"] = sweep.best_k;
    summary["pca_explained_variance_ratio"] = pca.explained_variance_ratio;
    summary["warnings"] = res.warnings;
    io::write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");
  });
  const auto& bin = res.evaluation.binary.report;
  log << "pipeline: " << res.table.rows.size() << " windows, k = " << c.k << " (silhouette best k = " << sweep.best_k
      << "), binary accuracy " << io::fmt(bin.accuracy) << ", clean recall " << io::fmt(bin.per_class[0].recall)
      << "\n";
  return kExitOk;
}

// Artifacts every successful pipeline run leaves in the output directory.
inline const std::vector<std::string>& core_artifacts() {
  static const std::vector<std::string> names{"features.csv",      "silhouette.csv",          "silhouette.svg",
                                              "pca_scores.csv",    "pca_scatter.svg",         "confusion_multiclass.svg",
                                              "confusion_binary.svg", "report.json"};
  return names;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Clustering-based artifact detection for ECG/PPG recordings", "bioclust"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub, bool signals, bool features) {
    sub->add_option("--config", f.config, "JSON file of settings; flags override it");
    sub->add_option("--out", f.out, "Output directory (default out)");
    sub->add_option("--seed", f.seed, "Random seed (fallback BIOCLUST_SEED, then 42)");
    if (signals) {
      sub->add_option("--input", f.inputs, "Recording CSV file(s)");
      sub->add_option("--synth-config", f.synth_config, "Protocol JSON file, or 'default'");
      sub->add_option("--modality", f.modality, "ecg or ppg");
      sub->add_option("--fs", f.fs, "Sampling rate in Hz (default 1000)");
      sub->add_option("--window-s", f.window_s, "Window length in seconds (default 120)");
      sub->add_option("--stride-s", f.stride_s, "Window stride in seconds (default 30)");
      sub->add_option("--sessions", f.sessions, "Synthetic sessions to pool (default 4)");
    }
    if (features) sub->add_option("--input", f.inputs, "Features CSV");
  };
  auto add_model_flags = [&](CLI::App* sub) {
    sub->add_option("--k", f.k, "Number of clusters (default 4)");
    sub->add_option("--method", f.method, "kmeans or agglo");
    sub->add_flag("--no-standardize", f.no_standardize, "Cluster raw features");
  };

  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic protocol recordings");
  synth_cmd->add_option("--config", f.config, "JSON file of settings; flags override it");
  synth_cmd->add_option("--out", f.out, "Output directory (default out)");
  synth_cmd->add_option("--seed", f.seed, "Random seed (fallback BIOCLUST_SEED, then 42)");
  synth_cmd->add_option("--synth-config", f.synth_config, "Protocol JSON file, or 'default'");
  synth_cmd->add_option("--modality", f.modality, "ecg or ppg (default both)");
  synth_cmd->add_option("--fs", f.fs, "Sampling rate in Hz (default 1000)");
  synth_cmd->add_option("--sessions", f.sessions, "Sessions to generate (default 1)");

  auto* features_cmd = app.add_subcommand("features", "Window recordings and write the feature CSV");
  add_common(features_cmd, true, false);

  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster a feature CSV and write the model");
  add_common(cluster_cmd, false, true);
  add_model_flags(cluster_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Silhouette score over a range of k");
  add_common(sweep_cmd, false, true);
  sweep_cmd->add_option("--k-sweep", f.k_sweep, "Range A:B (default 2:10)");
  sweep_cmd->add_flag("--no-standardize", f.no_standardize, "Use raw features");

  auto* pca_cmd = app.add_subcommand("pca", "Two-component PCA of a feature CSV");
  add_common(pca_cmd, false, true);
  pca_cmd->add_option("--model", f.model, "Model JSON; its standardizer and clusters are used");
  pca_cmd->add_flag("--no-standardize", f.no_standardize, "Use raw features");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a model against labelled features");
  add_common(evaluate_cmd, false, true);
  evaluate_cmd->add_option("--model", f.model, "Model JSON");
  evaluate_cmd->add_option("--mapping", f.mapping, "majority or optimal");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage and write all outputs");
  add_common(pipeline_cmd, true, false);
  add_model_flags(pipeline_cmd);
  pipeline_cmd->add_option("--k-sweep", f.k_sweep, "Silhouette range A:B (default 2:10)");
  pipeline_cmd->add_option("--mapping", f.mapping, "majority or optimal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    auto c = stage("config", [&] { return resolve(*sub, f); });
    if (sub == synth_cmd) {
      if (!given(*sub, "--sessions") && !given(*sub, "--config")) c.sessions = 1;
      return cmd_synth(c, out);
    }
    if (sub == features_cmd) return cmd_features(c, out);
    if (sub == cluster_cmd) return cmd_cluster(c, out);
    if (sub == sweep_cmd) return cmd_sweep(c, out);
    if (sub == pca_cmd) return cmd_pca(c, out);
    if (sub == evaluate_cmd) return cmd_evaluate(c, out);
    return cmd_pipeline(c, out);
  } catch (const StageError& e) {
    err << "bioclust " << sub->get_name() << ": " << e.stage << " stage failed: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    err << "bioclust " << sub->get_name() << ": internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace bioclust::cli
