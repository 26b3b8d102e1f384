#include <gtest/gtest.h>

#include "bioclust/core.hpp"
#include "bioclust/spectral.hpp"

using namespace bioclust;

TEST(Matrix, RowsAndAppend) {
  Matrix m;
  m.append_row(std::vector<double>{1, 2, 3});
  m.append_row(std::vector<double>{4, 5, 6});
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m(1, 2), 6.0);
  EXPECT_THROW(m.append_row(std::vector<double>{1}), InvalidArgument);
  EXPECT_THROW(Matrix::from_rows({{1, 2}, {3}}), InvalidArgument);
}

TEST(Matrix, FiniteCheck) {
  auto m = Matrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_TRUE(m.all_finite());
  m(0, 1) = std::nan("");
  EXPECT_FALSE(m.all_finite());
}

TEST(Core, LabelsAndModality) {
  EXPECT_TRUE(is_valid_label(3));
  EXPECT_FALSE(is_valid_label(4));
  EXPECT_FALSE(is_valid_label(-1));
  EXPECT_EQ(parse_modality("ppg"), Modality::Ppg);
  EXPECT_THROW(parse_modality("eeg"), InvalidArgument);
}

TEST(Core, DeriveSeedSeparatesStreams) {
  EXPECT_NE(derive_seed(42, 0), derive_seed(42, 1));
  EXPECT_NE(derive_seed(42, 1), derive_seed(43, 1));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(Spectral, FftRoundTrip) {
  std::vector<double> x{1, -2, 3, 0.5, 4, -1, 0, 2};
  spectral::RealFft fft(x.size());
  auto y = fft.inverse(fft.forward(x));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i] / 8.0, x[i], 1e-12);
}

TEST(Spectral, HannIsPeriodic) {
  const auto w = spectral::hann(8);
  EXPECT_DOUBLE_EQ(w[0], 0.0);
  EXPECT_NEAR(w[4], 1.0, 1e-15);
  EXPECT_NEAR(w[1], w[7], 1e-15);
}

TEST(Spectral, BandpassKeepsInBandTone) {
  const double fs = 1000;
  std::vector<double> x(4000);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::sin(2 * std::numbers::pi * 5 * i / fs) + std::sin(2 * std::numbers::pi * 100 * i / fs);
  const auto y = spectral::bandpass_fft(x, fs, 50, 200);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(y[i], std::sin(2 * std::numbers::pi * 100 * i / fs), 1e-9);
}
