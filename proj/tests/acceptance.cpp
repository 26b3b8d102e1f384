// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "bioclust/cli.hpp"
#include "bioclust/evaluation.hpp"
#include "bioclust/features.hpp"
#include "bioclust/kmeans.hpp"
#include "bioclust/pca.hpp"
#include "bioclust/pipeline.hpp"
#include "bioclust/silhouette.hpp"
#include "bioclust/synthgen.hpp"
#include "oracles.hpp"

using namespace bioclust;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

std::string f4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

double recall_of(const ClassReport& r, Label l) {
  for (const auto& m : r.per_class)
    if (m.label == l) return m.recall;
  return 0.0;
}

Outcome metric_reproduction() {
  Outcome o;
  const auto ecg = class_report(ConfusionMatrix::from_counts({0, 1}, {{295, 5}, {96, 54}}));
  const auto ppg = class_report(ConfusionMatrix::from_counts({0, 1}, {{289, 11}, {89, 61}}));
  o.check(std::abs(ecg.per_class[0].recall - 0.9833) <= 1e-4, "ecg clean recall " + f4(ecg.per_class[0].recall));
  o.check(std::abs(ecg.accuracy - 0.7756) <= 1e-4, "ecg accuracy " + f4(ecg.accuracy));
  o.check(std::abs(ppg.per_class[0].recall - 0.9633) <= 1e-4, "ppg clean recall " + f4(ppg.per_class[0].recall));
  if (o.ok)
    o.detail = "ecg recall " + f4(ecg.per_class[0].recall) + ", accuracy " + f4(ecg.accuracy) + "; ppg recall " +
               f4(ppg.per_class[0].recall);
  return o;
}

Outcome kmeans_oracle() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int hits = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    const auto X = oracle::random_matrix(n, d, rng);
    const auto m = kmeans_fit(X, 2, rng(), {.restarts = 20});
    if (std::abs(m.inertia - oracle::exhaustive_min_wcss(X, 2)) <= 1e-9) ++hits;
  }
  int monotone = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(10, 200)(rng);
    const auto X = oracle::random_matrix(n, 3, rng);
    const int k = std::uniform_int_distribution<int>(2, 8)(rng);
    const auto m = kmeans_fit(X, k, rng(), {.restarts = 1});
    bool ok = true;
    for (std::size_t i = 1; i < m.inertia_history.size(); ++i) ok = ok && m.inertia_history[i] <= m.inertia_history[i - 1];
    monotone += ok;
  }
  o.check(hits >= 190, "exhaustive match " + std::to_string(hits) + "/200");
  o.check(monotone == 100, "monotone " + std::to_string(monotone) + "/100");
  if (o.ok) o.detail = "exhaustive match " + std::to_string(hits) + "/200, monotone 100/100";
  return o;
}

Outcome silhouette_checks() {
  Outcome o;
  std::mt19937_64 rng(77);
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 5 + rng() % 60;
    const auto X = oracle::random_matrix(n, 1 + rng() % 4, rng);
    const int k = 2 + static_cast<int>(rng() % 4);
    std::vector<int> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<int>(i < static_cast<std::size_t>(k) ? i : rng() % k);
    worst = std::max(worst, std::abs(silhouette_score(X, a) - oracle::silhouette(X, a)));
  }
  o.check(worst <= 1e-9, "max deviation " + sci(worst));
  int correct = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const double centres[3][2] = {{0, 0}, {12, 0}, {6, 12}};
    Matrix X(150, 2);
    for (std::size_t i = 0; i < 150; ++i)
      for (std::size_t j = 0; j < 2; ++j) X(i, j) = centres[i % 3][j] + noise(g);
    correct += silhouette_sweep(X, 2, 10, seed).best_k == 3;
  }
  o.check(correct == 10, "blobs best_k=3 on " + std::to_string(correct) + "/10");
  if (o.ok) o.detail = "max deviation " + sci(worst) + ", blobs 10/10";
  return o;
}

Outcome pca_properties() {
  Outcome o;
  std::mt19937_64 rng(31);
  int good = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 2 + rng() % 6, n = d + 2 + rng() % 50;
    const auto X = oracle::random_matrix(n, d, rng, 0.5 + static_cast<double>(rng() % 5));
    const auto m = pca_fit(X, static_cast<int>(d));
    bool ok = true;
    double sum = 0;
    for (std::size_t i = 0; i < d; ++i) {
      sum += m.explained_variance_ratio[i];
      if (i > 0 && m.explained_variance_ratio[i] > m.explained_variance_ratio[i - 1]) ok = false;
      for (std::size_t j = 0; j < d; ++j) {
        double dot = 0;
        for (std::size_t c = 0; c < d; ++c) dot += m.components(i, c) * m.components(j, c);
        if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-9) ok = false;
      }
    }
    good += ok && std::abs(sum - 1.0) <= 1e-9;
  }
  o.check(good == 100, "property holds on " + std::to_string(good) + "/100");
  std::mt19937_64 g(5);
  std::normal_distribution<double> z(0.0, 1.0);
  Matrix X(10000, 2);
  for (std::size_t i = 0; i < X.rows(); ++i) X(i, 0) = std::sqrt(2.0) * z(g), X(i, 1) = z(g);
  const auto m = pca_fit(X, 2);
  const double r0 = m.explained_variance_ratio[0], r1 = m.explained_variance_ratio[1];
  o.check(std::abs(r0 - 2.0 / 3.0) <= 0.02 && std::abs(r1 - 1.0 / 3.0) <= 0.02, "gaussian ratios " + f4(r0) + "," + f4(r1));
  if (o.ok) o.detail = "100/100, gaussian ratios " + f4(r0) + ", " + f4(r1);
  return o;
}

Outcome feature_checks() {
  Outcome o;
  const double fs = 1000;
  auto sine = [&](double hz) {
    std::vector<double> x(static_cast<std::size_t>(120 * fs));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2 * std::numbers::pi * hz * static_cast<double>(i) / fs);
    return x;
  };
  const auto x50 = sine(50);
  const auto f50 = extract_features(x50, fs);
  const double var = oracle::population_variance(x50);
  const double hi = f50.highband_power / f50.total_power;
  o.check(hi >= 0.95, "50 Hz highband fraction " + f4(hi));
  o.check(std::abs(f50.total_power - var) <= 0.05 * var, "50 Hz total " + f4(f50.total_power) + " vs variance " + f4(var));
  const auto f5 = extract_features(sine(5), fs);
  const double lo = f5.highband_power / f5.total_power;
  o.check(lo <= 0.05, "5 Hz highband fraction " + f4(lo));
  const std::vector<double> flat(120000, 2.5);
  const auto c = extract_features(flat, fs);
  o.check(c.variance == 0 && c.zcr == 0 && c.skewness == 0 && c.kurtosis == 0 && c.total_power == 0 &&
              c.highband_power == 0 && c.mean == 2.5 && c.median == 2.5 && c.rms == 2.5,
          "constant window not degenerate");
  if (o.ok) o.detail = "50 Hz fraction " + f4(hi) + ", total/variance " + f4(f50.total_power / var) + ", 5 Hz fraction " + f4(lo);
  return o;
}

PipelineResult protocol_run(Modality m, double motion_ratio, double stride_s) {
  std::vector<SignalRecord> recs;
  for (std::uint64_t s = 42; s < 46; ++s) {
    synth::ProtocolConfig c;
    c.seed = s;
    c.motion_amplitude_ratio = motion_ratio;
    recs.push_back(synth::generate_protocol_recording(c, m));
  }
  PipelineOptions opt;
  opt.k = 4;
  opt.stride_s = stride_s;
  opt.mapping = MappingMethod::Majority;
  return evaluate_pipeline(recs, opt);
}

std::string recalls(const PipelineResult& r) {
  std::string s = "binary clean " + f4(recall_of(r.evaluation.binary.report, kClean));
  for (const auto& m : r.evaluation.multiclass.report.per_class) s += ", L" + std::to_string(m.label) + " " + f4(m.recall);
  return s;
}

Outcome synthetic_end_to_end() {
  Outcome o;
  constexpr double stride = 60;
  const auto base = protocol_run(Modality::Ecg, 2.0, stride);
  const double clean = recall_of(base.evaluation.binary.report, kClean);
  const double failure = recall_of(base.evaluation.multiclass.report, kSensorFailure);
  o.check(clean >= 0.90, "binary clean recall " + f4(clean));
  o.check(failure >= 0.60, "sensor failure recall " + f4(failure));
  const auto mild = protocol_run(Modality::Ecg, 0.3, stride);
  const auto& mr = mild.evaluation.multiclass.report;
  const double rc = recall_of(mr, kClean), re = recall_of(mr, kEmg), rm = recall_of(mr, kMotion);
  o.check(rc > re && re > rm, "mild ordering clean " + f4(rc) + ", emg " + f4(re) + ", motion " + f4(rm));
  std::printf("  [6] ecg stride %.0f default: %s\n", stride, recalls(base).c_str());
  std::printf("  [6] ecg stride %.0f mild motion: %s\n", stride, recalls(mild).c_str());
  std::printf("  [6] diagnostic ecg stride 30 default: %s\n", recalls(protocol_run(Modality::Ecg, 2.0, 30)).c_str());
  std::printf("  [6] diagnostic ppg stride %.0f default: %s\n", stride, recalls(protocol_run(Modality::Ppg, 2.0, stride)).c_str());
  if (o.ok)
    o.detail = "clean " + f4(clean) + ", failure " + f4(failure) + "; mild clean " + f4(rc) + " > emg " + f4(re) +
               " > motion " + f4(rm);
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto root = fs::temp_directory_path() / "bioclust_acceptance";
  fs::remove_all(root);
  std::string reports[2];
  for (int i = 0; i < 2; ++i) {
    const auto dir = (root / ("run" + std::to_string(i))).string();
    const char* argv[] = {"bioclust", "pipeline", "--synth-config", "default", "--seed", "42", "--out", dir.c_str()};
    std::ostringstream out, err;
    const int code = cli::run(8, argv, out, err);
    o.check(code == 0, "pipeline exit " + std::to_string(code) + ": " + err.str());
    if (code == 0) reports[i] = io::read_file(fs::path(dir) / "report.json");
  }
  o.check(!reports[0].empty() && reports[0] == reports[1], "report.json differs between runs");
  if (o.ok) o.detail = "report.json identical (" + std::to_string(reports[0].size()) + " bytes)";
  fs::remove_all(root);
  return o;
}

Outcome evaluation_identities() {
  Outcome o;
  std::mt19937_64 rng(99);
  int good = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 300;
    std::vector<Label> truth(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) truth[i] = static_cast<Label>(rng() % 4), pred[i] = static_cast<Label>(rng() % 4);
    const auto classes = present_classes(truth, pred);
    const auto cm = confusion(truth, pred, classes);
    const auto rep = class_report(cm);
    bool ok = true;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      std::int64_t support = 0;
      for (Label l : truth) support += l == classes[i];
      ok = ok && cm.row_sum(i) == support;
    }
    double weighted = 0;
    for (const auto& m : rep.per_class) weighted += static_cast<double>(m.support) * m.f1;
    ok = ok && std::abs(weighted / static_cast<double>(n) - rep.weighted_f1) <= 1e-12;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) agree += (truth[i] == kClean) == (pred[i] == kClean);
    const auto collapsed = collapse_matrix(cm);
    ok = ok && std::abs(class_report(collapsed).accuracy - static_cast<double>(agree) / static_cast<double>(n)) <= 1e-12;
    good += ok;
  }
  o.check(good == 100, "identities hold on " + std::to_string(good) + "/100");
  if (o.ok) o.detail = "100/100";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "metric reproduction", 1, metric_reproduction},
      {2, "k-means oracle equivalence", 10, kmeans_oracle},
      {3, "silhouette correctness", 10, silhouette_checks},
      {4, "pca properties", 10, pca_properties},
      {5, "feature correctness", 5, feature_checks},
      {6, "synthetic end-to-end", 60, synthetic_end_to_end},
      {7, "determinism", 60, determinism},
      {8, "evaluation identities", 5, evaluation_identities},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < c.budget_s, "runtime over budget");
    failed += !o.ok;
    std::printf("%s criterion %d (%s) %.2fs/%.0fs: %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, c.budget_s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
