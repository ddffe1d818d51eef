#include <doctest.h>

#include "helpers.hpp"
#include "monopole/error.hpp"
#include "monopole/null_forms.hpp"
#include "oracles.hpp"

using namespace monopole;
using test::pauli_i;
using namespace test::oracle;

namespace {

double rel(const LieField& a, const LieField& b) { return test::max_abs_diff(a, b) / test::max_abs(b); }

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

TEST_CASE("Q12 elementary cases") {
  const TorusGrid g(32, 2.0 * kPi);
  const Matrix one = Matrix::identity(1);
  const LieField f = LieField::scalar_times(g, [](double x, double y) { return std::sin(x + 2 * y) + std::cos(3 * y); }, one);
  CHECK(test::max_abs(null_form_Q12(f, f)) < 1e-13);
  const LieField p1 = LieField::scalar_times(g, [](double x, double y) { return std::sin(x + 2 * y); }, one);
  const LieField p2 = LieField::scalar_times(g, [](double x, double y) { return std::cos(2 * x + 4 * y); }, one);
  CHECK(test::max_abs(null_form_Q12(p1, p2)) < 1e-12);
  const LieField fx = LieField::scalar_times(g, [](double x, double) { return std::sin(2 * x); }, pauli_i(1));
  const LieField gy = LieField::scalar_times(g, [](double, double y) { return std::cos(y); }, pauli_i(2));
  CHECK(test::max_abs_diff(null_form_Q12(fx, gy), product(partial_derivative(fx, 1), partial_derivative(gy, 2))) <
        1e-13);
  // Matrix-valued self interaction is the commutator of the derivatives.
  std::mt19937_64 rng(1);
  const LieField h = test::smooth_su2(g, rng, 1.0);
  CHECK(test::max_abs_diff(null_form_Q12(h, h), bracket(partial_derivative(h, 1), partial_derivative(h, 2))) < 1e-12);
}

TEST_CASE("Q12 against the convolution oracle") {
  std::mt19937_64 rng(2);
  for (int n : {8, 16}) {
    const TorusGrid g(n, 3.0);
    const LieField f = random_band_limited(g, 2, n / 2 - 1, rng), h = random_band_limited(g, 2, n / 2 - 1, rng);
    const LieField expect = convolve(
        naive_forward(f), naive_forward(h), [](Vec2 xi, Vec2 eta) { return cplx(-(xi[0] * eta[1] - xi[1] * eta[0])); },
        false);
    CAPTURE(n);
    CHECK(rel(null_form_Q12(f, h), expect) < 1e-10);
  }
}

TEST_CASE("Q against the convolution oracle") {
  std::mt19937_64 rng(3);
  const TorusGrid g(16, 2.5);
  for (int rank : {1, 2}) {
    const LieField a = random_band_limited(g, rank, 7, rng), at = random_band_limited(g, rank, 7, rng);
    const LieField b = random_band_limited(g, rank, 7, rng), bt = random_band_limited(g, rank, 7, rng);
    for (QVariant variant : {QVariant::same_sign_minus, QVariant::opposite_sign_plus})
      for (int sign : {+1, -1})
        for (int j : {1, 2})
          for (QCombine combine : {QCombine::product, QCombine::commutator}) {
            if (rank == 1 && combine == QCombine::commutator) continue;
            CAPTURE(rank);
            CAPTURE(j);
            CAPTURE(sign);
            const LieField expect = null_form_Q_oracle(a, at, b, bt, j, variant, sign, combine);
            CHECK(rel(null_form_Q(a, at, b, bt, j, variant, sign, combine), expect) < 1e-10);
          }
  }
}

TEST_CASE("Q elementary cases") {
  const TorusGrid g(32, 2.0 * kPi);
  const LieField zero(g, 2);
  CHECK(test::max_abs(null_form_Q(zero, zero, zero, zero, 1, QVariant::opposite_sign_plus)) == 0.0);
  // Opposite spatial directions: the direction factor vanishes.
  const Matrix one = Matrix::identity(1);
  auto plane = [&](int kx, int ky, cplx c) {
    return LieField::sample(g, 1, [=](double x, double y) {
      Matrix m(1);
      m(0, 0) = c * std::polar(1.0, kx * x + ky * y);
      return m;
    });
  };
  const LieField a = plane(2, 1, 1.0), at = plane(2, 1, cplx(0.3, 0.7));
  const LieField b = plane(-4, -2, 1.0), bt = plane(-4, -2, cplx(-1.1, 0.2));
  for (int j : {1, 2}) {
    const LieField q = null_form_Q(a, at, b, bt, j, QVariant::opposite_sign_plus);
    CHECK(test::max_abs(q) < 1e-12);
  }
  CHECK(kind_of([&] { null_form_Q(a, at, b, bt, 3, QVariant::opposite_sign_plus); }) == ErrorKind::invalid_argument);
  (void)one;
}

TEST_CASE("symbol of Q") {
  CHECK(symbol_q(1.0, {1.0, 0.0}, 1.0, {0.0, 1.0}, 1) == 0.0);
  CHECK(symbol_q(1.0, {1.0, 0.0}, 2.0, {0.0, 1.0}, 1) == doctest::Approx(2.0));
  CHECK(kind_of([] { symbol_q(1.0, {0.0, 0.0}, 1.0, {1.0, 0.0}, 1); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { symbol_q(1.0, {1.0, 0.0}, 1.0, {0.0, 0.0}, 2); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { symbol_q(1.0, {1.0, 0.0}, 1.0, {0.0, 1.0}, 0); }) == ErrorKind::invalid_argument);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10.0, 10.0), c(0.1, 10.0);
  double worst_time = 0.0, worst_direction = 0.0;
  int far = 0;
  for (int k = 0; k < 10000; ++k) {
    const Vec2 xi{u(rng), u(rng)}, eta{u(rng), u(rng)};
    const double tau = u(rng), lambda = u(rng);
    const int j = 1 + k % 2;
    worst_time = std::max(worst_time, std::abs(symbol_q(-std::hypot(xi[0], xi[1]), xi, lambda, eta, j)));
    const double s = c(rng);
    // Relative to the size of the cone factors: the direction factor is a
    // cancellation of unit-size terms.
    const Vec2 anti{-s * xi[0], -s * xi[1]};
    worst_direction = std::max(worst_direction,
                               std::abs(symbol_q(tau, xi, lambda, anti, j)) / q_far_bound(tau, xi, lambda, anti));
    if (q_far_from_cone(tau, xi, lambda, eta)) {
      ++far;
      CHECK(std::abs(symbol_q(tau, xi, lambda, eta, j)) <= q_far_bound(tau, xi, lambda, eta));
    }
  }
  CHECK(worst_time <= 1e-14);
  CHECK(worst_direction <= 1e-14);
  CHECK(far > 1000);
  CHECK(q_far_from_cone(2.0, {1.0, 0.0}, 0.0, {3.0, 0.0}));
  CHECK_FALSE(q_far_from_cone(1.9, {1.0, 0.0}, 5.9, {3.0, 0.0}));
}
