#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "bioclust/core.hpp"
#include "bioclust/spectral.hpp"

namespace bioclust {

inline constexpr std::size_t kNumFeatures = 9;
inline constexpr double kHighbandEdgeHz = 30.0;

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames{
    "mean", "variance", "median", "skewness", "kurtosis", "zcr", "rms", "total_power", "highband_power"};

// Per-window statistics. Kurtosis is excess kurtosis (normal -> 0). Window
// energy, if wanted, is length * rms^2.
struct FeatureVector {
  double mean = 0.0;
  double variance = 0.0;
  double median = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  double zcr = 0.0;
  double rms = 0.0;
  double total_power = 0.0;
  double highband_power = 0.0;

  std::array<double, kNumFeatures> as_array() const {
    return {mean, variance, median, skewness, kurtosis, zcr, rms, total_power, highband_power};
  }
  static FeatureVector from_array(std::span<const double> a) {
    if (a.size() != kNumFeatures) throw InvalidArgument("feature row must have 9 entries");
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8]};
  }
};

inline double median_of(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

// Sign changes of (x - mean); a run of exact zeros does not count as a
// crossing on its own.
inline std::size_t zero_crossings(std::span<const double> x, double centre) {
  std::size_t n = 0;
  int prev = 0;
  for (double v : x) {
    const double c = v - centre;
    const int s = (c > 0.0) - (c < 0.0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++n;
    prev = s;
  }
  return n;
}

inline FeatureVector extract_features(std::span<const double> x, double fs,
                                      const spectral::WelchOptions& welch_opt = {}) {
  if (x.empty()) throw InvalidArgument("extract_features: empty window");
  if (!(fs > 0.0)) throw InvalidArgument("extract_features: sampling rate must be positive");

  const auto n = static_cast<double>(x.size());
  FeatureVector f;
  double sum = 0.0, sumsq = 0.0;
  for (double v : x) {
    sum += v;
    sumsq += v * v;
  }
  f.mean = sum / n;
  f.rms = std::sqrt(sumsq / n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - f.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  f.variance = m2;
  // Below this the window is numerically constant.
  if (m2 > 1e-24 * std::max(1.0, f.mean * f.mean)) {
    f.skewness = m3 / std::pow(m2, 1.5);
    f.kurtosis = m4 / (m2 * m2) - 3.0;
  } else {
    f.variance = 0.0;
  }

  f.median = median_of(x);
  f.zcr = static_cast<double>(f.variance == 0.0 ? 0 : zero_crossings(x, f.mean));

  const auto psd = spectral::welch(x, fs, welch_opt);
  f.total_power = psd.total_power();
  f.highband_power = std::min(psd.band_power(kHighbandEdgeHz), f.total_power);
  return f;
}

// Per-column mean and population standard deviation.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  std::size_t dims() const noexcept { return mean.size(); }
};

inline Standardizer fit_standardizer(const Matrix& X) {
  if (X.empty()) throw InvalidArgument("fit_standardizer: empty matrix");
  Standardizer s;
  s.mean.assign(X.cols(), 0.0);
  s.scale.assign(X.cols(), 0.0);
  const auto n = static_cast<double>(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j) s.mean[j] += X(i, j);
  for (double& m : s.mean) m /= n;
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j) {
      const double d = X(i, j) - s.mean[j];
      s.scale[j] += d * d;
    }
  for (std::size_t j = 0; j < X.cols(); ++j) {
    s.scale[j] = std::sqrt(s.scale[j] / n);
    // Round-off residue on a constant column.
    if (s.scale[j] <= 1e-12 * std::max(1.0, std::abs(s.mean[j]))) s.scale[j] = 0.0;
  }
  return s;
}

inline Matrix apply_standardizer(const Standardizer& s, const Matrix& X) {
  if (X.cols() != s.dims())
    throw InvalidArgument("apply_standardizer: matrix has " + std::to_string(X.cols()) + " columns, standardizer " +
                          std::to_string(s.dims()));
  Matrix out(X.rows(), X.cols());
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j)
      out(i, j) = s.scale[j] > 0.0 ? (X(i, j) - s.mean[j]) / s.scale[j] : 0.0;
  return out;
}

}  // namespace bioclust
