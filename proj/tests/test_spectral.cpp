#include <doctest.h>

#include "helpers.hpp"
#include "monopole/error.hpp"
#include "monopole/spectral.hpp"

using namespace monopole;
using test::pauli_i;

namespace {

const double kPi = std::numbers::pi;

LieField mode_field(const TorusGrid& g, const std::function<double(double, double)>& f) {
  return LieField::scalar_times(g, f, pauli_i(3));
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK(kind_of([] { TorusGrid(0, 1.0); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { TorusGrid(12, 1.0); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { TorusGrid(16, 0.0); }) == ErrorKind::invalid_argument);
  const TorusGrid g(16, 4.0);
  CHECK(g.dx() == 0.25);
  CHECK(g.mode(7) == 7);
  CHECK(g.mode(8) == -8);
  CHECK(g.mode(15) == -1);
}

TEST_CASE("transform round trip and Parseval") {
  std::mt19937_64 rng(5);
  const TorusGrid g(32, 3.0);
  const LieField a = test::smooth_su2(g, rng, 1.0);
  CHECK(test::max_abs_diff(ifft(fft(a)), a) < 1e-14);
  CHECK(std::abs(l2_norm(fft(a)) - l2_norm(a)) < 1e-13 * l2_norm(a));
}

TEST_CASE("L2 norm of a constant is |c| L") {
  const TorusGrid g(16, 3.0);
  const LieField c = LieField::constant(g, pauli_i(1));
  CHECK(std::abs(l2_norm(c) - frobenius_norm(pauli_i(1)) * 3.0) < 1e-14);
}

TEST_CASE("derivative, Riesz transform and inverse Laplacian on single modes") {
  const double L = 5.0;
  const TorusGrid g(32, L);
  const double k = 2.0 * kPi / L * 3.0;
  const LieField s = mode_field(g, [&](double x, double) { return std::sin(k * x); });
  const LieField c = mode_field(g, [&](double x, double) { return std::cos(k * x); });
  const LieField cy = mode_field(g, [&](double, double y) { return std::cos(k * y); });
  const LieField sy = mode_field(g, [&](double, double y) { return std::sin(k * y); });

  LieField kc = c;
  kc *= k;
  CHECK(test::max_abs_diff(partial_derivative(s, 1), kc) < 1e-12);
  CHECK(test::max_abs(partial_derivative(s, 2)) < 1e-12);
  // i sgn(k) on e^{ikx}: cos -> -sin
  CHECK(test::max_abs_diff(riesz(c, 1), -s) < 1e-13);
  CHECK(test::max_abs_diff(riesz(cy, 2), -sy) < 1e-13);
  LieField expect = s;
  expect *= -1.0 / (k * k);
  CHECK(test::max_abs_diff(inverse_laplacian(s), expect) < 1e-14);
  LieField lap = s;
  lap *= -k * k;
  CHECK(test::max_abs_diff(laplacian(s), lap) < 1e-10);
}

TEST_CASE("odd symbols vanish on the Nyquist line") {
  const TorusGrid g(16, 2.0 * kPi);
  // (-1)^ix is the Nyquist mode along x
  const LieField w = mode_field(g, [&](double x, double) { return std::cos(8.0 * x); });
  CHECK(test::max_abs(partial_derivative(w, 1)) < 1e-13);
  CHECK(test::max_abs(riesz(w, 1)) < 1e-13);
  // Its second derivative is even and survives
  CHECK(test::max_abs(laplacian(w)) > 1.0);
}

TEST_CASE("inverse Laplacian rejects a nonzero mean") {
  const TorusGrid g(16, 1.0);
  const LieField c = LieField::constant(g, pauli_i(2));
  CHECK(kind_of([&] { inverse_laplacian(c); }) == ErrorKind::nonzero_mean);
}

TEST_CASE("multiplier tables: zero mode policy and non-finite symbols") {
  const TorusGrid g(8, 2.0 * kPi);
  Multiplier m{[](double a, double b) { return cplx(1.0 / std::hypot(a, b)); }, ZeroModePolicy::explicit_value, 7.0,
               "inverse modulus"};
  const auto tab = symbol_table(g, m);
  CHECK(tab[0] == cplx(7.0));
  m.zero_mode = ZeroModePolicy::identity;
  CHECK(symbol_table(g, m)[0] == cplx(1.0));
  Multiplier bad{[](double, double) { return cplx(std::nan("")); }, ZeroModePolicy::zero, 0.0, "nan"};
  CHECK(kind_of([&] { symbol_table(g, bad); }) == ErrorKind::non_finite);
  // Bessel potential of a single mode
  const LieField s = mode_field(g, [](double x, double) { return std::sin(2.0 * x); });
  LieField expect = s;
  expect *= std::pow(5.0, 0.35);
  CHECK(test::max_abs_diff(apply_multiplier(s, Multiplier::bessel(0.7)), expect) < 1e-13);
}

TEST_CASE("dealias mask keeps |k| <= N/3") {
  const TorusGrid g(32, 2.0 * kPi);
  LieField lo = mode_field(g, [](double x, double y) { return std::cos(10.0 * x) + std::sin(9.0 * y); });
  LieField hi = mode_field(g, [](double x, double) { return std::cos(11.0 * x); });
  LieField a = lo, b = hi;
  dealias(a);
  dealias(b);
  CHECK(test::max_abs_diff(a, lo) < 1e-14);
  CHECK(test::max_abs(b) < 1e-14);
}

TEST_CASE("pointwise products agree with matrix arithmetic") {
  std::mt19937_64 rng(6);
  const TorusGrid g(8, 1.0);
  const LieField a = test::smooth_su2(g, rng, 1.0), b = test::smooth_su2(g, rng, 1.0);
  const LieField p = product(a, b), q = bracket(a, b), e = field_exp(a);
  for (int iy = 0; iy < 8; iy += 3) {
    for (int ix = 0; ix < 8; ix += 3) {
      CHECK(test::max_abs_diff(p.at(ix, iy), a.at(ix, iy) * b.at(ix, iy)) < 1e-15);
      CHECK(test::max_abs_diff(q.at(ix, iy), bracket(a.at(ix, iy), b.at(ix, iy))) < 1e-15);
      CHECK(test::max_abs_diff(e.at(ix, iy), lie_exp(a.at(ix, iy))) < 1e-14);
      CHECK(test::max_abs_diff(adjoint(a).at(ix, iy), a.at(ix, iy).adjoint()) == 0.0);
    }
  }
  LieField other(TorusGrid(16, 1.0), 2);
  CHECK(kind_of([&] { product(a, other); }) == ErrorKind::grid_mismatch);
  CHECK(kind_of([&] { product(a, LieField(g, 3)); }) == ErrorKind::rank_mismatch);
}

TEST_CASE("free wave propagation matches the closed form") {
  const TorusGrid g(32, 2.0 * kPi);
  const double k = 3.0, t = 0.77;
  const LieField u0 = mode_field(g, [&](double x, double) { return std::sin(k * x); });
  const LieField u1(g, 2);
  const WaveState w = wave_propagate(u0, u1, t);
  LieField expect = u0;
  expect *= std::cos(k * t);
  CHECK(test::max_abs_diff(w.u, expect) < 1e-13);
  LieField expect_t = u0;
  expect_t *= -k * std::sin(k * t);
  CHECK(test::max_abs_diff(w.ut, expect_t) < 1e-12);
  CHECK(std::abs(wave_energy(w) - wave_energy({u0, u1})) < 1e-12 * wave_energy({u0, u1}));
}

TEST_CASE("Duhamel step with a constant source") {
  // u_tt + k^2 u = -b sin(kx) from rest: u = -b sin(kx) (1 - cos(k dt)) / k^2
  const TorusGrid g(32, 2.0 * kPi);
  const double k = 2.0, b = 0.3, dt = 0.1;
  const LieField s = mode_field(g, [&](double x, double) { return std::sin(k * x); });
  LieField src = s;
  src *= b;
  const WaveState zero{LieField(g, 2), LieField(g, 2)};
  const WaveState w = duhamel_step(zero, src, dt);
  LieField expect = s;
  expect *= -b * (1.0 - std::cos(k * dt)) / (k * k);
  CHECK(test::max_abs_diff(w.u, expect) < 1e-14);
  LieField expect_t = s;
  expect_t *= -b * std::sin(k * dt) / k;
  CHECK(test::max_abs_diff(w.ut, expect_t) < 1e-14);
  CHECK(kind_of([&] { duhamel_step(zero, src, 0.0); }) == ErrorKind::invalid_argument);
}
