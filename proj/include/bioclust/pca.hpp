#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bioclust/core.hpp"

namespace bioclust {

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // row i is the eigenvector of values[i]
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls below
// `tol` relative to the full norm. Input must be symmetric.
inline SymmetricEigen jacobi_eigen(Matrix a, double tol = 1e-12, int max_sweeps = 100) {
  const std::size_t d = a.rows();
  if (a.cols() != d) throw InvalidArgument("jacobi_eigen: matrix must be square");
  Matrix v(d, d);
  for (std::size_t i = 0; i < d; ++i) v(i, i) = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  double full = 0.0;
  for (double x : a.data()) full += x * x;
  full = std::sqrt(full);

  for (int sweep = 0; sweep < max_sweeps && off_norm() > tol * std::max(full, 1e-300); ++sweep) {
    for (std::size_t p = 0; p + 1 < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < d; ++r) {
          const double arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < d; ++r) {
          const double apr = a(p, r), aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        for (std::size_t r = 0; r < d; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  SymmetricEigen out;
  out.vectors = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    out.values.push_back(a(order[i], order[i]));
    for (std::size_t r = 0; r < d; ++r) out.vectors(i, r) = v(r, order[i]);
  }
  return out;
}

struct PcaModel {
  Matrix components;  // p x d, orthonormal rows
  std::vector<double> explained_variance;
  std::vector<double> explained_variance_ratio;
  std::vector<double> column_means;
};

// Top-p principal directions of the column-centred data (covariance with
// 1/(n-1)). Each component is signed so its largest-magnitude entry is positive.
inline PcaModel pca_fit(const Matrix& X, int p = 2) {
  const std::size_t n = X.rows(), d = X.cols();
  if (n < 2) throw InvalidArgument("pca_fit: need at least two rows");
  if (p < 1 || static_cast<std::size_t>(p) > std::min(n, d))
    throw InvalidArgument("pca_fit: p = " + std::to_string(p) + " outside [1, min(n, d)]");

  PcaModel m;
  m.column_means.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) m.column_means[j] += X(i, j);
  for (double& mu : m.column_means) mu /= static_cast<double>(n);

  Matrix cov(d, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a) {
      const double xa = X(i, a) - m.column_means[a];
      for (std::size_t b = a; b < d; ++b) cov(a, b) += xa * (X(i, b) - m.column_means[b]);
    }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) cov(b, a) = cov(a, b) /= static_cast<double>(n - 1);

  double trace = 0.0;
  for (std::size_t a = 0; a < d; ++a) trace += cov(a, a);

  const auto eig = jacobi_eigen(cov);
  m.components = Matrix(static_cast<std::size_t>(p), d);
  for (std::size_t i = 0; i < static_cast<std::size_t>(p); ++i) {
    auto row = eig.vectors.row(i);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < d; ++j)
      if (std::abs(row[j]) > std::abs(row[arg])) arg = j;
    const double sign = row[arg] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < d; ++j) m.components(i, j) = sign * row[j];
    const double ev = std::max(eig.values[i], 0.0);
    m.explained_variance.push_back(ev);
    m.explained_variance_ratio.push_back(trace > 0.0 ? ev / trace : 0.0);
  }
  return m;
}

inline Matrix pca_transform(const PcaModel& m, const Matrix& X) {
  if (X.cols() != m.column_means.size())
    throw InvalidArgument("pca_transform: data has " + std::to_string(X.cols()) + " columns, model " +
                          std::to_string(m.column_means.size()));
  const std::size_t p = m.components.rows();
  Matrix out(X.rows(), p);
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t c = 0; c < p; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < X.cols(); ++j) s += (X(i, j) - m.column_means[j]) * m.components(c, j);
      out(i, c) = s;
    }
  return out;
}

}  // namespace bioclust
