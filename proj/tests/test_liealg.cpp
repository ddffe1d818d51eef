#include <doctest.h>

#include "helpers.hpp"
#include "monopole/error.hpp"
#include "monopole/liealg.hpp"

using namespace monopole;
using test::pauli_i;

TEST_CASE("bracket of the Pauli generators") {
  // (i s1/2)(i s2/2) - (i s2/2)(i s1/2) = -(s1 s2 - s2 s1)/4 = -(2 i s3)/4 = -i s3/2
  const Matrix expected = cplx(-1.0) * pauli_i(3);
  CHECK(test::max_abs_diff(bracket(pauli_i(1), pauli_i(2)), expected) < 1e-15);
}

TEST_CASE("bracket is antisymmetric") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Matrix x = test::random_su2(rng), y = test::random_su2(rng);
    CHECK(frobenius_norm(bracket(x, x)) == 0.0);
    CHECK(frobenius_norm(bracket(x, y) + bracket(y, x)) < 1e-15);
    const Matrix z = bracket(x, y);
    CHECK(is_anti_hermitian(z));
    CHECK(is_traceless(z));
  }
}

TEST_CASE("bracket rejects mismatched ranks") {
  CHECK_THROWS_AS(bracket(Matrix::identity(2), Matrix::identity(3)), Error);
  try {
    bracket(Matrix::identity(2), Matrix::identity(3));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::rank_mismatch);
  }
}

TEST_CASE("LieMatrix validates its invariants") {
  CHECK_NOTHROW(LieMatrix(pauli_i(1)));
  CHECK_THROWS_AS(LieMatrix(Matrix::identity(2)), Error);
  const cplx i(0, 1);
  CHECK_THROWS_AS(LieMatrix(Matrix(2, {i, 0.0, 0.0, i})), Error);  // anti-Hermitian, trace 2i
}

TEST_CASE("exponential: zero, diagonal closed form, inverse") {
  CHECK(test::max_abs_diff(lie_exp(Matrix::zero(2)), Matrix::identity(2)) < 1e-15);
  const cplx i(0, 1);
  const Matrix x = cplx(std::numbers::pi) * pauli_i(3);  // i pi sigma_3 / 2
  CHECK(test::max_abs_diff(lie_exp(x), Matrix(2, {i, 0.0, 0.0, -i})) < 1e-14);

  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const Matrix y = test::random_su2(rng, 3.0);
    const Matrix g = lie_exp(y);
    CHECK(is_special_unitary(g, 1e-10));
    CHECK(std::abs(determinant(g) - 1.0) < 1e-10);
    CHECK(test::max_abs_diff(g * lie_exp(-y), Matrix::identity(2)) < 1e-12);
    CHECK(test::max_abs_diff(g * inverse(g), Matrix::identity(2)) < 1e-12);
  }
}

TEST_CASE("su basis is orthonormal under -2 tr(XY)") {
  for (int n : {2, 3, 4}) {
    const auto b = su_basis(n);
    REQUIRE(b.size() == static_cast<std::size_t>(n * n - 1));
    for (std::size_t p = 0; p < b.size(); ++p) {
      CHECK(is_anti_hermitian(b[p]));
      CHECK(is_traceless(b[p]));
      for (std::size_t q = 0; q < b.size(); ++q) {
        const cplx ip = -2.0 * (b[p] * b[q]).trace();
        CHECK(std::abs(ip - (p == q ? 1.0 : 0.0)) < 1e-14);
      }
    }
  }
}

TEST_CASE("su projection keeps su(n) and removes the rest") {
  std::mt19937_64 rng(3);
  const Matrix x = test::random_su2(rng);
  CHECK(test::max_abs_diff(su_projection(x), x) < 1e-15);
  CHECK(frobenius_norm(su_projection(Matrix::identity(2))) < 1e-15);
}
