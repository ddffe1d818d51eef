#include "monopole/data.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace monopole {

namespace {

LieField random_scalar(const TorusGrid& g, double bandwidth, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  LieField w(g, 1);
  for (auto& x : w.values()) x = normal(rng);
  Spectrum c = fft(w);
  const auto tab = tables_for(g);
  const double unit = 2.0 * std::numbers::pi / g.length();
  std::vector<double> filt(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double m = tab->abs_xi[k] / unit;
    filt[k] = k == 0 ? 0.0 : std::exp(-m * m / (2.0 * bandwidth * bandwidth));
  }
  c.multiply(std::span<const double>(filt));
  w = ifft(c);
  for (auto& x : w.values()) x = x.real();
  const double rms = l2_norm(w) / g.length();
  if (rms > 0) w *= 1.0 / rms;
  return w;
}

}  // namespace

LieField random_lie_field(const TorusGrid& grid, int rank, double amplitude, double bandwidth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LieField out(grid, rank);
  for (const Matrix& t : su_basis(rank)) {
    const LieField s = random_scalar(grid, bandwidth, rng);
    auto src = s.plane(0);
    for (int e = 0; e < out.planes(); ++e) {
      const cplx te = amplitude * t.entries()[static_cast<std::size_t>(e)];
      if (te == 0.0) continue;
      auto dst = out.plane(e);
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += te * src[k];
    }
  }
  return out;
}

CoulombData gaussian_data(const TorusGrid& grid, int rank, double amplitude, double width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-0.3, 0.3);
  const auto basis = su_basis(rank);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  const double len = grid.length(), c = len / 2.0;
  auto bump = [&]() {
    const double x0 = c + offset(rng), y0 = c + offset(rng);
    const Matrix& t = basis[pick(rng)];
    return LieField::scalar_times(
        grid,
        [=](double x, double y) {
          // Sum over the neighbouring periodic images so the profile is smooth on the torus.
          double sum = 0.0;
          for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j) {
              const double dx = x - x0 + i * len, dy = y - y0 + j * len;
              sum += std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
            }
          return amplitude * sum;
        },
        t);
  };
  LieField f = bump() + bump();
  LieField phi0 = bump() + bump();
  LieField a1 = -partial_derivative(f, 2);
  LieField a2 = partial_derivative(f, 1);
  a1.set_label("a1");
  a2.set_label("a2");
  phi0.set_label("phi0");
  return {std::move(a1), std::move(a2), std::move(phi0), std::move(f)};
}

}  // namespace monopole
