#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bioclust/core.hpp"
#include "bioclust/ingest.hpp"
#include "bioclust/spectral.hpp"

namespace bioclust::synth {

enum class FailureMode { Flatline, Saturation };

struct NoiseSpec {
  Label artifact_class = kMotion;
  // Artifact RMS relative to the clean RMS of the span it lands on.
  double amplitude_ratio = 2.0;
  // EMG pass band in Hz.
  double band_lo = 30.0;
  double band_hi = 450.0;
  FailureMode failure_mode = FailureMode::Flatline;
  // Saturation rail; defaults to record max + record range.
  std::optional<double> rail_value;

  static NoiseSpec motion(double ratio = 2.0) { return {.artifact_class = kMotion, .amplitude_ratio = ratio, .rail_value = std::nullopt}; }
  static NoiseSpec emg(double ratio = 1.0, double lo = 30.0, double hi = 450.0) {
    return {.artifact_class = kEmg, .amplitude_ratio = ratio, .band_lo = lo, .band_hi = hi, .rail_value = std::nullopt};
  }
  static NoiseSpec sensor_failure(FailureMode mode = FailureMode::Flatline) {
    return {.artifact_class = kSensorFailure, .amplitude_ratio = 1.0, .failure_mode = mode, .rail_value = std::nullopt};
  }
};

inline void validate(const NoiseSpec& s, double fs) {
  if (s.artifact_class < kMotion || s.artifact_class > kSensorFailure)
    throw InvalidArgument("artifact class must be 1, 2 or 3");
  if (!(s.amplitude_ratio >= 0.0) || !std::isfinite(s.amplitude_ratio))
    throw InvalidArgument("amplitude_ratio must be finite and >= 0");
  if (s.artifact_class == kEmg) {
    if (s.band_lo < 30.0) throw InvalidArgument("EMG band lower edge must be >= 30 Hz");
    if (!(s.band_hi > s.band_lo)) throw InvalidArgument("EMG band upper edge must exceed lower edge");
    if (s.band_lo >= fs / 2.0) throw InvalidArgument("EMG band lies above the Nyquist frequency");
  }
}

struct ProtocolConfig {
  double total_duration = 900.0;
  double rest_duration = 120.0;
  double activity_duration = 60.0;
  std::vector<Label> activity_sequence{kMotion, kEmg, kSensorFailure, kMotion, kEmg};
  double sampling_rate = 1000.0;
  double heart_rate = 72.0;
  std::uint64_t seed = 42;

  double motion_amplitude_ratio = 2.0;
  double emg_amplitude_ratio = 1.0;
  double emg_band_lo = 30.0;
  double emg_band_hi = 450.0;
  FailureMode failure_mode = FailureMode::Flatline;
  // Per-slot intensity variation: each motion/EMG slot scales its nominal
  // amplitude_ratio by exp(intensity_spread * z), z ~ N(0, 1) seeded per slot.
  double intensity_spread = 0.5;

  std::size_t slot_count() const {
    return static_cast<std::size_t>(std::llround(total_duration / (rest_duration + activity_duration)));
  }
};

inline void validate(const ProtocolConfig& c) {
  if (!(c.sampling_rate > 0.0)) throw InvalidArgument("sampling_rate must be > 0");
  if (!(c.heart_rate >= 30.0 && c.heart_rate <= 220.0)) throw InvalidArgument("heart_rate must lie in [30, 220]");
  if (!(c.rest_duration > 0.0) || !(c.activity_duration > 0.0))
    throw InvalidArgument("rest and activity durations must be positive");
  if (!(c.total_duration > 0.0)) throw InvalidArgument("total_duration must be positive");
  if (!(c.intensity_spread >= 0.0)) throw InvalidArgument("intensity_spread must be >= 0");
  const double cycle = c.rest_duration + c.activity_duration;
  const double cycles = c.total_duration / cycle;
  if (std::abs(cycles - std::round(cycles)) > 1e-9)
    throw InvalidArgument("total_duration must be an integer multiple of rest_duration + activity_duration");
  if (c.activity_sequence.size() != c.slot_count())
    throw InvalidArgument("activity_sequence has " + std::to_string(c.activity_sequence.size()) +
                          " entries but the schedule has " + std::to_string(c.slot_count()) + " activity slots");
  for (Label l : c.activity_sequence)
    if (l < kMotion || l > kSensorFailure) throw InvalidArgument("activity_sequence entries must be 1, 2 or 3");
  for (double fsamp : {c.rest_duration, c.activity_duration})
    if (std::abs(fsamp * c.sampling_rate - std::round(fsamp * c.sampling_rate)) > 1e-6)
      throw InvalidArgument("slot durations must be whole sample counts");
}

// One scheduled activity slot, in seconds.
struct Slot {
  double start_s;
  double end_s;
  Label label;
};

// Activity slots of the rest/activity alternation: each cycle is one rest
// period followed by one activity period.
inline std::vector<Slot> activity_slots(const ProtocolConfig& c) {
  std::vector<Slot> out;
  const double cycle = c.rest_duration + c.activity_duration;
  for (std::size_t i = 0; i < c.slot_count(); ++i) {
    const double start = static_cast<double>(i) * cycle + c.rest_duration;
    out.push_back({start, start + c.activity_duration, c.activity_sequence[i]});
  }
  return out;
}

namespace detail {

inline std::size_t sample_count(double duration, double fs) {
  if (!(duration > 0.0)) throw InvalidArgument("duration must be positive");
  if (!(fs > 0.0)) throw InvalidArgument("sampling rate must be positive");
  return static_cast<std::size_t>(std::llround(duration * fs));
}

// Beat onset times with +-3% uniform jitter on each interval.
inline std::vector<double> beat_times(double duration, double heart_rate, double first, std::mt19937_64& rng) {
  if (!(heart_rate > 0.0)) throw InvalidArgument("heart_rate must be positive");
  const double rr = 60.0 / heart_rate;
  std::uniform_real_distribution<double> jitter(-0.03, 0.03);
  std::vector<double> t;
  for (double at = first * rr; at < duration + rr; at += rr * (1.0 + jitter(rng))) t.push_back(at);
  return t;
}

struct Wave {
  double offset;  // seconds relative to the R peak
  double amplitude;
  double width;  // Gaussian sigma, seconds
};

// P, Q, R, S, T
inline constexpr Wave kEcgWaves[] = {
    {-0.200, 0.15, 0.025}, {-0.040, -0.12, 0.010}, {0.000, 1.00, 0.011}, {0.040, -0.25, 0.011}, {0.280, 0.30, 0.045},
};

inline SignalRecord blank(std::size_t n, double fs, Modality m, std::uint64_t seed) {
  SignalRecord r;
  r.samples.assign(n, 0.0);
  r.labels.assign(n, kClean);
  r.valid.assign(n, 1);
  r.fs = fs;
  r.modality = m;
  r.source_id = std::string(to_string(m)) + "_seed" + std::to_string(seed);
  return r;
}

inline double span_rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

inline void scale_to_rms(std::vector<double>& x, double target) {
  const double cur = span_rms(x);
  const double g = cur > 0.0 ? target / cur : 0.0;
  for (double& v : x) v *= g;
}

inline void scale_to_true_rms(std::vector<double>& x, double target) {
  double ss = 0.0;
  for (double v : x) ss += v * v;
  const double cur = x.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(x.size()));
  const double g = cur > 0.0 ? target / cur : 0.0;
  for (double& v : x) v *= g;
}

// Tukey (tapered cosine) envelope; `ramp` is the total tapered fraction.
inline std::vector<double> tukey(std::size_t n, double ramp) {
  std::vector<double> w(n, 1.0);
  const double edge = 0.5 * ramp * static_cast<double>(n > 1 ? n - 1 : 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    const double from_end = static_cast<double>(n - 1) - x;
    const double d = std::min(x, from_end);
    if (d < edge) w[i] = 0.5 - 0.5 * std::cos(std::numbers::pi * d / edge);
  }
  return w;
}

}  // namespace detail

// Sum-of-Gaussians PQRST beats at a jittered heart rate plus low-level
// measurement noise. Amplitudes are roughly millivolts.
inline SignalRecord generate_clean_ecg(double duration, double fs, double heart_rate, std::uint64_t seed) {
  const std::size_t n = detail::sample_count(duration, fs);
  if (!(heart_rate > 0.0)) throw InvalidArgument("heart_rate must be positive");
  std::mt19937_64 rng(derive_seed(seed, 1));
  auto rec = detail::blank(n, fs, Modality::Ecg, seed);

  const double rr = 60.0 / heart_rate;
  // QT shortens with rate; stretch the T-wave offset by sqrt(RR).
  const double t_stretch = std::sqrt(rr);
  for (double r_peak : detail::beat_times(duration, heart_rate, 0.35, rng)) {
    for (const auto& w : detail::kEcgWaves) {
      const double centre = r_peak + (w.offset > 0.1 ? w.offset * t_stretch : w.offset);
      const auto lo = static_cast<std::int64_t>(std::floor((centre - 5.0 * w.width) * fs));
      const auto hi = static_cast<std::int64_t>(std::ceil((centre + 5.0 * w.width) * fs));
      for (std::int64_t i = std::max<std::int64_t>(lo, 0); i <= hi && i < static_cast<std::int64_t>(n); ++i) {
        const double z = (static_cast<double>(i) / fs - centre) / w.width;
        rec.samples[static_cast<std::size_t>(i)] += w.amplitude * std::exp(-0.5 * z * z);
      }
    }
  }
  std::normal_distribution<double> noise(0.0, 0.01);
  for (double& v : rec.samples) v += noise(rng);
  return rec;
}

// Pulse wave: raised-cosine systolic upstroke, cosine decay, and a Gaussian
// dicrotic bump, sitting on a DC level.
inline SignalRecord generate_clean_ppg(double duration, double fs, double heart_rate, std::uint64_t seed) {
  const std::size_t n = detail::sample_count(duration, fs);
  if (!(heart_rate > 0.0)) throw InvalidArgument("heart_rate must be positive");
  std::mt19937_64 rng(derive_seed(seed, 2));
  auto rec = detail::blank(n, fs, Modality::Ppg, seed);

  constexpr double kRise = 0.18;  // fraction of the beat spent on the upstroke
  constexpr double kBaseline = 1.0;
  const auto beats = detail::beat_times(duration, heart_rate, 0.0, rng);
  std::size_t b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    while (b + 1 < beats.size() && beats[b + 1] <= t) ++b;
    const double period = beats[b + 1 < beats.size() ? b + 1 : b] - beats[b];
    const double phase = period > 0.0 ? std::clamp((t - beats[b]) / period, 0.0, 1.0) : 0.0;
    double v;
    if (phase < kRise)
      v = 0.5 - 0.5 * std::cos(std::numbers::pi * phase / kRise);
    else
      v = 0.5 + 0.5 * std::cos(std::numbers::pi * (phase - kRise) / (1.0 - kRise));
    const double dz = (phase - 0.45) / 0.05;
    v += 0.15 * std::exp(-0.5 * dz * dz);
    rec.samples[i] = kBaseline + v;
  }
  std::normal_distribution<double> noise(0.0, 0.005);
  for (double& v : rec.samples) v += noise(rng);
  return rec;
}

// Corrupt [start_s, end_s) with the given artifact and relabel it. Samples
// outside the span are untouched. A span that already carries a non-zero
// label is rejected.
inline SignalRecord inject_artifact(SignalRecord rec, double start_s, double end_s, const NoiseSpec& spec,
                                    std::uint64_t seed) {
  validate(spec, rec.fs);
  if (!(start_s >= 0.0) || !(end_s > start_s)) throw RangeError("artifact span must satisfy 0 <= start < end");
  const auto begin = static_cast<std::size_t>(std::llround(start_s * rec.fs));
  const auto end = static_cast<std::size_t>(std::llround(end_s * rec.fs));
  if (end > rec.size()) throw RangeError("artifact span extends past the end of the record");
  for (std::size_t i = begin; i < end; ++i)
    if (rec.labels[i] != kClean)
      throw InvalidArgument("artifact span overlaps an earlier artifact at sample " + std::to_string(i));

  std::span<double> span(rec.samples.data() + begin, end - begin);
  std::mt19937_64 rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(spec.artifact_class)));
  const double clean_rms = detail::span_rms(span);

  switch (spec.artifact_class) {
    case kMotion: {
      if (spec.amplitude_ratio == 0.0) break;
      std::normal_distribution<double> step(0.0, 1.0);
      std::vector<double> walk(span.size());
      double acc = 0.0;
      for (double& v : walk) v = (acc += step(rng));
      auto drift = spectral::bandpass_fft(walk, rec.fs, 0.0, 1.0);
      double mean = 0.0;
      for (double v : drift) mean += v;
      mean /= static_cast<double>(drift.size());
      const auto env = detail::tukey(drift.size(), 0.2);
      for (std::size_t i = 0; i < drift.size(); ++i) drift[i] = (drift[i] - mean) * env[i];
      detail::scale_to_true_rms(drift, spec.amplitude_ratio * clean_rms);
      for (std::size_t i = 0; i < span.size(); ++i) span[i] += drift[i];
      break;
    }
    case kEmg: {
      if (spec.amplitude_ratio == 0.0) break;
      std::normal_distribution<double> white(0.0, 1.0);
      std::vector<double> w(span.size());
      for (double& v : w) v = white(rng);
      auto burst = spectral::bandpass_fft(w, rec.fs, spec.band_lo, spec.band_hi);
      detail::scale_to_rms(burst, spec.amplitude_ratio * clean_rms);
      for (std::size_t i = 0; i < span.size(); ++i) span[i] += burst[i];
      break;
    }
    case kSensorFailure: {
      double level;
      if (spec.failure_mode == FailureMode::Flatline) {
        level = begin > 0 ? rec.samples[begin - 1] : span.front();
      } else if (spec.rail_value) {
        level = *spec.rail_value;
      } else {
        const auto [mn, mx] = std::minmax_element(rec.samples.begin(), rec.samples.end());
        level = *mx + (*mx - *mn);
      }
      std::fill(span.begin(), span.end(), level);
      break;
    }
  }
  std::fill(rec.labels.begin() + static_cast<std::ptrdiff_t>(begin), rec.labels.begin() + static_cast<std::ptrdiff_t>(end),
            spec.artifact_class);
  return rec;
}

// Noise for activity slot `slot` of the protocol, including its intensity draw.
inline NoiseSpec noise_for(const ProtocolConfig& c, std::size_t slot, Label cls) {
  std::mt19937_64 rng(derive_seed(c.seed, 2000 + slot));
  std::normal_distribution<double> z(0.0, 1.0);
  const double gain = std::exp(c.intensity_spread * z(rng));
  switch (cls) {
    case kMotion: return NoiseSpec::motion(c.motion_amplitude_ratio * gain);
    case kEmg: return NoiseSpec::emg(c.emg_amplitude_ratio * gain, c.emg_band_lo, c.emg_band_hi);
    default: return NoiseSpec::sensor_failure(c.failure_mode);
  }
}

// Clean waveform for the whole session with one artifact per activity slot.
inline SignalRecord generate_protocol_recording(const ProtocolConfig& c, Modality modality) {
  validate(c);
  auto rec = modality == Modality::Ecg ? generate_clean_ecg(c.total_duration, c.sampling_rate, c.heart_rate, c.seed)
                                       : generate_clean_ppg(c.total_duration, c.sampling_rate, c.heart_rate, c.seed);
  const auto slots = activity_slots(c);
  for (std::size_t i = 0; i < slots.size(); ++i)
    rec = inject_artifact(std::move(rec), slots[i].start_s, slots[i].end_s, noise_for(c, i, slots[i].label),
                          derive_seed(c.seed, 1000 + i));
  return rec;
}

}  // namespace bioclust::synth
