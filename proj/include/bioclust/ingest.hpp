#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bioclust/core.hpp"

namespace bioclust {

// A uniformly sampled single-channel recording with one ground-truth label
// per sample. `valid` is the per-sample validity mask: false marks samples
// that windows must not cover (non-finite values, time-base gaps).
struct SignalRecord {
  std::vector<double> samples;
  std::vector<Label> labels;
  std::vector<std::uint8_t> valid;
  double fs = 1000.0;
  Modality modality = Modality::Ecg;
  std::string source_id;

  std::size_t size() const noexcept { return samples.size(); }
  double duration() const noexcept { return static_cast<double>(samples.size()) / fs; }
  bool is_valid(std::size_t i) const noexcept { return valid.empty() || valid[i] != 0; }
};

// Checks the structural invariants; throws InvalidArgument on violation.
inline void validate(const SignalRecord& r) {
  if (r.samples.empty()) throw InvalidArgument("record '" + r.source_id + "' has no samples");
  if (r.samples.size() != r.labels.size()) throw InvalidArgument("samples/labels length mismatch");
  if (!r.valid.empty() && r.valid.size() != r.samples.size())
    throw InvalidArgument("validity mask length mismatch");
  if (!(r.fs > 0.0) || !std::isfinite(r.fs)) throw InvalidArgument("sampling rate must be positive");
  for (std::size_t i = 0; i < r.labels.size(); ++i)
    if (!is_valid_label(r.labels[i]))
      throw InvalidArgument("label " + std::to_string(r.labels[i]) + " at index " + std::to_string(i) +
                            " outside 0..3");
}

struct LoadOptions {
  // Accept empty / nan / null value cells as non-finite markers; they are
  // masked by drop_invalid. When false such cells are parse errors.
  bool permissive = true;
  // Allowed relative deviation of a timestamp step from 1/fs.
  double timestamp_tolerance = 0.10;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && p == end;
}

inline bool is_missing_marker(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower.empty() || lower == "nan" || lower == "null" || lower == "na" || lower == "-nan";
}

}  // namespace detail

// Parse the recording CSV (header: sample_index,value,label[,timestamp_s], in
// any column order). Rows are numbered from 1 for the first data row.
inline SignalRecord parse_recording(std::istream& in, double fs, Modality modality, std::string source_id,
                                    const LoadOptions& opt = {}) {
  if (!(fs > 0.0)) throw InvalidArgument("sampling rate must be positive");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file: missing header row", 0);
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM

  const auto header = detail::split_csv(line);
  int col_index = -1, col_value = -1, col_label = -1, col_time = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "sample_index") col_index = static_cast<int>(c);
    else if (header[c] == "value") col_value = static_cast<int>(c);
    else if (header[c] == "label") col_label = static_cast<int>(c);
    else if (header[c] == "timestamp_s") col_time = static_cast<int>(c);
  }
  for (auto [col, name] : {std::pair{col_index, "sample_index"}, {col_value, "value"}, {col_label, "label"}})
    if (col < 0) throw ParseError(std::string("missing column '") + name + "'", 0);

  SignalRecord rec;
  rec.fs = fs;
  rec.modality = modality;
  rec.source_id = std::move(source_id);

  const double dt = 1.0 / fs;
  std::int64_t prev_index = -1;
  double prev_time = std::numeric_limits<double>::quiet_NaN();
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto cells = detail::split_csv(line);
    if (cells.size() < header.size())
      throw ParseError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                           " cells, found " + std::to_string(cells.size()),
                       row);

    bool ok = true;

    std::int64_t idx = 0;
    if (!detail::parse_int(cells[col_index], idx))
      throw ParseError("row " + std::to_string(row) + ": non-integer sample_index '" +
                           std::string(cells[col_index]) + "'",
                       row);
    if (prev_index < 0 && idx != 0)
      throw ParseError("row " + std::to_string(row) + ": sample_index must start at 0", row);
    if (prev_index >= 0 && idx <= prev_index)
      throw ParseError("row " + std::to_string(row) + ": sample_index not increasing", row);
    if (prev_index >= 0 && idx != prev_index + 1) ok = false;  // discontinued series
    prev_index = idx;

    double value = 0.0;
    if (!detail::parse_double(cells[col_value], value) || (!opt.permissive && !std::isfinite(value))) {
      if (opt.permissive && detail::is_missing_marker(cells[col_value]))
        value = std::numeric_limits<double>::quiet_NaN();
      else
        throw ParseError("row " + std::to_string(row) + ": non-numeric value '" + std::string(cells[col_value]) +
                             "'",
                         row);
    }
    if (!std::isfinite(value)) ok = false;

    int label = 0;
    if (!detail::parse_int(cells[col_label], label))
      throw ParseError("row " + std::to_string(row) + ": non-integer label '" + std::string(cells[col_label]) + "'",
                       row);
    if (!is_valid_label(label))
      throw ParseError("row " + std::to_string(row) + ": label " + std::to_string(label) + " outside 0..3", row);

    if (col_time >= 0) {
      double t = 0.0;
      if (!detail::parse_double(cells[col_time], t))
        throw ParseError("row " + std::to_string(row) + ": non-numeric timestamp_s", row);
      if (std::isfinite(prev_time) && std::abs((t - prev_time) - dt) > opt.timestamp_tolerance * dt) ok = false;
      prev_time = t;
    }

    rec.samples.push_back(value);
    rec.labels.push_back(label);
    rec.valid.push_back(ok ? 1 : 0);
  }
  if (rec.samples.empty()) throw EmptyInput("recording has a header but no data rows");
  return rec;
}

inline SignalRecord load_recording(const std::filesystem::path& path, double fs, Modality modality,
                                   const LoadOptions& opt = {}) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open recording '" + path.string() + "'", 0);
  return parse_recording(in, fs, modality, path.stem().string(), opt);
}

// Mark non-finite samples invalid in the mask. Sample values are never
// changed. Throws EmptyInput when nothing valid remains.
inline SignalRecord drop_invalid(SignalRecord rec) {
  if (rec.valid.size() != rec.samples.size()) rec.valid.assign(rec.samples.size(), 1);
  std::size_t n_valid = 0;
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    if (!std::isfinite(rec.samples[i])) rec.valid[i] = 0;
    n_valid += rec.valid[i];
  }
  if (n_valid == 0) throw EmptyInput("record '" + rec.source_id + "' has no valid samples");
  return rec;
}

// Write in the CSV schema read by parse_recording. Values use the shortest
// round-trip form, so a write/load cycle is bit-exact.
inline void write_recording(std::ostream& out, const SignalRecord& rec, bool with_timestamps = false) {
  out << "sample_index,value,label";
  if (with_timestamps) out << ",timestamp_s";
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < rec.samples.size(); ++i) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, rec.samples[i]);
    out << i << ',' << std::string_view(buf, p - buf) << ',' << rec.labels[i];
    if (with_timestamps) {
      auto [q, ec2] = std::to_chars(buf, buf + sizeof buf, static_cast<double>(i) / rec.fs);
      out << ',' << std::string_view(buf, q - buf);
    }
    out << '\n';
  }
}

}  // namespace bioclust
