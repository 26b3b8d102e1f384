#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "bioclust/core.hpp"

namespace bioclust::spectral {

namespace detail {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan p) const noexcept { fftw_destroy_plan(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

}  // namespace detail

// Real-to-complex FFT of a fixed length. Plans are made with FFTW_ESTIMATE so
// results do not depend on timing measurements. FFTW planning is not
// thread-safe; create plans on one thread.
class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(detail::fftw_buffer<double>(n)),
        out_(detail::fftw_buffer<fftw_complex>(n / 2 + 1)) {
    if (n == 0) throw InvalidArgument("FFT length must be positive");
    forward_.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE));
    inverse_.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n), out_.get(), in_.get(), FFTW_ESTIMATE));
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t bins() const noexcept { return n_ / 2 + 1; }

  std::vector<std::complex<double>> forward(std::span<const double> x) {
    std::copy(x.begin(), x.end(), in_.get());
    fftw_execute(forward_.get());
    std::vector<std::complex<double>> spec(bins());
    for (std::size_t k = 0; k < bins(); ++k) spec[k] = {out_[k][0], out_[k][1]};
    return spec;
  }

  // Unnormalized inverse: forward then inverse scales by n.
  std::vector<double> inverse(std::span<const std::complex<double>> spec) {
    for (std::size_t k = 0; k < bins(); ++k) {
      out_[k][0] = spec[k].real();
      out_[k][1] = spec[k].imag();
    }
    fftw_execute(inverse_.get());
    return {in_.get(), in_.get() + n_};
  }

 private:
  std::size_t n_;
  detail::FftwBuffer<double> in_;
  detail::FftwBuffer<fftw_complex> out_;
  detail::Plan forward_;
  detail::Plan inverse_;
};

struct WelchOptions {
  double segment_seconds = 4.0;
  double overlap = 0.5;
};

struct Psd {
  std::vector<double> freqs;  // Hz
  std::vector<double> power;  // amplitude^2 / Hz, one-sided
  double df = 0.0;

  // Integral of the PSD over bins with f > min_hz (strict) and f <= max_hz.
  double band_power(double min_hz, double max_hz = INFINITY) const {
    double s = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k)
      if (freqs[k] > min_hz && freqs[k] <= max_hz) s += power[k];
    return s * df;
  }
  double total_power() const {
    double s = 0.0;
    for (double p : power) s += p;
    return s * df;
  }
};

// Periodic Hann window of length n.
inline std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

// Welch PSD: Hann-windowed segments, each detrended by its own mean, density
// scaling, one-sided, averaged by mean. A signal shorter than one segment is
// treated as a single segment of its own length.
inline Psd welch(std::span<const double> x, double fs, const WelchOptions& opt = {}) {
  if (x.empty()) throw InvalidArgument("welch: empty signal");
  if (!(fs > 0.0)) throw InvalidArgument("welch: sampling rate must be positive");

  std::size_t nseg = static_cast<std::size_t>(std::llround(opt.segment_seconds * fs));
  nseg = std::clamp<std::size_t>(nseg, 1, x.size());
  std::size_t step = nseg - static_cast<std::size_t>(std::floor(opt.overlap * static_cast<double>(nseg)));
  step = std::max<std::size_t>(step, 1);

  const auto w = hann(nseg);
  double wss = 0.0;
  for (double v : w) wss += v * v;

  RealFft fft(nseg);
  Psd psd;
  psd.df = fs / static_cast<double>(nseg);
  psd.freqs.resize(fft.bins());
  psd.power.assign(fft.bins(), 0.0);
  for (std::size_t k = 0; k < fft.bins(); ++k) psd.freqs[k] = psd.df * static_cast<double>(k);

  std::vector<double> seg(nseg);
  std::size_t count = 0;
  for (std::size_t start = 0; start + nseg <= x.size(); start += step, ++count) {
    double mean = 0.0;
    for (std::size_t i = 0; i < nseg; ++i) mean += x[start + i];
    mean /= static_cast<double>(nseg);
    for (std::size_t i = 0; i < nseg; ++i) seg[i] = (x[start + i] - mean) * w[i];
    const auto spec = fft.forward(seg);
    for (std::size_t k = 0; k < spec.size(); ++k) psd.power[k] += std::norm(spec[k]);
  }

  const double scale = 1.0 / (fs * wss * static_cast<double>(count));
  for (std::size_t k = 0; k < psd.power.size(); ++k) {
    psd.power[k] *= scale;
    const bool nyquist = (nseg % 2 == 0) && k == psd.power.size() - 1;
    if (k != 0 && !nyquist) psd.power[k] *= 2.0;
  }
  return psd;
}

// Zero every FFT bin outside [lo_hz, hi_hz] and transform back.
inline std::vector<double> bandpass_fft(std::span<const double> x, double fs, double lo_hz, double hi_hz) {
  if (x.empty()) return {};
  RealFft fft(x.size());
  auto spec = fft.forward(x);
  const double df = fs / static_cast<double>(x.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = df * static_cast<double>(k);
    if (f < lo_hz || f > hi_hz) spec[k] = 0.0;
  }
  auto y = fft.inverse(spec);
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (double& v : y) v *= inv_n;
  return y;
}

}  // namespace bioclust::spectral
