#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bioclust {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Bad arguments or configuration supplied by the caller.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An index or time span that falls outside the data it refers to.
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Malformed input data. Carries the 1-based data row when one applies
// (row 0 is the header line).
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t row_no = 0)
      : std::runtime_error(what), row(row_no) {}
  std::size_t row;
};

// Schema-valid file whose content does not fit the consumer (wrong field,
// wrong dimension).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Nothing usable left after validation.
struct EmptyInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Labels and modalities
// ---------------------------------------------------------------------------

using Label = int;

inline constexpr Label kClean = 0;
inline constexpr Label kMotion = 1;
inline constexpr Label kEmg = 2;
inline constexpr Label kSensorFailure = 3;
inline constexpr int kNumLabels = 4;

constexpr bool is_valid_label(Label l) noexcept { return l >= 0 && l < kNumLabels; }

inline std::string_view label_name(Label l) {
  switch (l) {
    case kClean: return "clean";
    case kMotion: return "motion";
    case kEmg: return "emg";
    case kSensorFailure: return "sensor_failure";
    default: return "unknown";
  }
}

enum class Modality { Ecg, Ppg };

inline std::string_view to_string(Modality m) { return m == Modality::Ecg ? "ecg" : "ppg"; }

inline Modality parse_modality(std::string_view s) {
  if (s == "ecg") return Modality::Ecg;
  if (s == "ppg") return Modality::Ppg;
  throw InvalidArgument("unknown modality '" + std::string(s) + "' (expected ecg or ppg)");
}

// ---------------------------------------------------------------------------
// Matrix: dense row-major n x d block of doubles.
// ---------------------------------------------------------------------------

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw InvalidArgument("ragged rows in Matrix::from_rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  void append_row(std::span<const double> r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw InvalidArgument("row width does not match matrix");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  const std::vector<double>& data() const noexcept { return data_; }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

// Mix a base seed with a stream index (splitmix64 finalizer) so that derived
// generators are decorrelated but fully determined by (seed, stream).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace bioclust
