#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "monopole/spectral.hpp"

namespace test {

using monopole::cplx;
using monopole::LieField;
using monopole::Matrix;
using monopole::TorusGrid;

inline Matrix pauli_i(int k) {
  // i sigma_k / 2
  const cplx i(0, 1);
  switch (k) {
    case 1: return Matrix(2, {0.0, 0.5 * i, 0.5 * i, 0.0});
    case 2: return Matrix(2, {0.0, 0.5, -0.5, 0.0});
    default: return Matrix(2, {0.5 * i, 0.0, 0.0, -0.5 * i});
  }
}

// Random su(2) element with Gaussian coefficients.
inline Matrix random_su2(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m = n(rng) * pauli_i(1);
  m += n(rng) * pauli_i(2);
  m += n(rng) * pauli_i(3);
  return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  return m;
}

inline double max_abs_diff(const LieField& a, const LieField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

inline double max_abs(const LieField& a) {
  double m = 0.0;
  for (const cplx& z : a.values()) m = std::max(m, std::abs(z));
  return m;
}

// Smooth su(2) field from a few low Fourier modes with random coefficients.
inline LieField smooth_su2(const TorusGrid& g, std::mt19937_64& rng, double amp, int modes = 3) {
  std::normal_distribution<double> n(0.0, 1.0);
  LieField out(g, 2);
  for (int k = 1; k <= 3; ++k) {
    for (int a = -modes; a <= modes; ++a) {
      for (int b = -modes; b <= modes; ++b) {
        if (a == 0 && b == 0) continue;
        const double c = amp * n(rng) / (a * a + b * b), ph = n(rng);
        const double unit = 2.0 * std::numbers::pi / g.length();
        out += LieField::scalar_times(
            g, [=](double x, double y) { return c * std::cos(unit * (a * x + b * y) + ph); }, pauli_i(k));
      }
    }
  }
  return out;
}

}  // namespace test
