#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "bioclust/core.hpp"
#include "bioclust/ingest.hpp"

namespace bioclust {

struct Window {
  std::size_t start = 0;   // sample index into the parent record
  std::size_t length = 0;  // samples
  Label label = kClean;
  std::string parent;

  double start_seconds(double fs) const { return static_cast<double>(start) / fs; }
  std::span<const double> view(const SignalRecord& r) const { return {r.samples.data() + start, length}; }
};

// Modal label of the window's samples. Ties go to the larger label so that a
// window half clean, half noisy is treated as noisy.
inline Label assign_window_label(const SignalRecord& rec, std::size_t start, std::size_t length) {
  if (start + length > rec.size()) throw RangeError("window extends past the end of the record");
  std::array<std::size_t, kNumLabels> counts{};
  for (std::size_t i = start; i < start + length; ++i) ++counts[static_cast<std::size_t>(rec.labels[i])];
  Label best = 0;
  for (Label l = 1; l < kNumLabels; ++l)
    if (counts[static_cast<std::size_t>(l)] >= counts[static_cast<std::size_t>(best)]) best = l;
  return best;
}

inline Label assign_window_label(const SignalRecord& rec, const Window& w) {
  return assign_window_label(rec, w.start, w.length);
}

// Fixed-length windows at 0, stride, 2*stride, ... A trailing partial window
// is dropped, as is any window covering an invalid sample. If the window is
// longer than the record the result is empty and `warning` (when given) is set.
inline std::vector<Window> slide_windows(const SignalRecord& rec, double window_seconds = 120.0,
                                         double stride_seconds = 30.0, std::string* warning = nullptr) {
  if (!(window_seconds > 0.0)) throw InvalidArgument("window length must be positive");
  if (!(stride_seconds > 0.0)) throw InvalidArgument("stride must be positive");
  const auto len = static_cast<std::size_t>(std::llround(window_seconds * rec.fs));
  const auto stride = static_cast<std::size_t>(std::llround(stride_seconds * rec.fs));
  if (len == 0 || stride == 0) throw InvalidArgument("window and stride must span at least one sample");

  std::vector<Window> out;
  if (len > rec.size()) {
    if (warning)
      *warning = "window of " + std::to_string(window_seconds) + " s is longer than record '" + rec.source_id +
                 "' (" + std::to_string(rec.duration()) + " s); no windows produced";
    return out;
  }

  // invalid_before[i] = number of invalid samples in [0, i)
  std::vector<std::size_t> invalid_before(rec.size() + 1, 0);
  for (std::size_t i = 0; i < rec.size(); ++i) invalid_before[i + 1] = invalid_before[i] + (rec.is_valid(i) ? 0 : 1);

  for (std::size_t start = 0; start + len <= rec.size(); start += stride) {
    if (invalid_before[start + len] != invalid_before[start]) continue;
    out.push_back({start, len, assign_window_label(rec, start, len), rec.source_id});
  }
  return out;
}

}  // namespace bioclust
