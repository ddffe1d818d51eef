#pragma once
// Small dense complex matrices: su(n) elements, their complexification, and
// the unitary group elements produced by the exponential map.

#include <complex>
#include <initializer_list>
#include <vector>

namespace monopole {

using cplx = std::complex<double>;

class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int rank) : rank_(rank), entries_(static_cast<std::size_t>(rank * rank)) {}
  // Row-major entries; the list length must be rank*rank.
  Matrix(int rank, std::initializer_list<cplx> entries);

  static Matrix identity(int rank);
  static Matrix zero(int rank) { return Matrix(rank); }

  int rank() const noexcept { return rank_; }
  cplx& operator()(int r, int c) { return entries_[static_cast<std::size_t>(r * rank_ + c)]; }
  const cplx& operator()(int r, int c) const {
    return entries_[static_cast<std::size_t>(r * rank_ + c)];
  }
  const std::vector<cplx>& entries() const noexcept { return entries_; }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(cplx s);

  Matrix adjoint() const;
  cplx trace() const;

 private:
  int rank_ = 0;
  std::vector<cplx> entries_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(cplx s, Matrix a);
Matrix operator*(Matrix a, cplx s);

// Validated su(n) element. Construction checks anti-Hermitian and traceless
// to the tolerances below; arithmetic happens on the underlying Matrix.
class LieMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;

  explicit LieMatrix(Matrix m);
  const Matrix& matrix() const noexcept { return m_; }
  int rank() const noexcept { return m_.rank(); }

 private:
  Matrix m_;
};

bool is_anti_hermitian(const Matrix& m, double tol = LieMatrix::kHermitianTol);
bool is_traceless(const Matrix& m, double tol = LieMatrix::kTraceTol);
bool is_special_unitary(const Matrix& g, double tol);
cplx determinant(const Matrix& m);

// XY - YX. Throws Error{rank_mismatch}.
Matrix bracket(const Matrix& x, const Matrix& y);
LieMatrix bracket(const LieMatrix& x, const LieMatrix& y);

// Matrix exponential by scaling and squaring with a Taylor core.
Matrix lie_exp(const Matrix& x);

double frobenius_norm(const Matrix& x);

// Inverse of a unitary matrix is its adjoint; general inverse by Gauss-Jordan.
Matrix inverse(const Matrix& m);

// {i*sigma_k/2} for n=2, generalized Gell-Mann matrices times i/2 otherwise.
// Orthogonal under -2 tr(XY); n^2-1 elements.
std::vector<Matrix> su_basis(int rank);

// Anti-Hermitian traceless part: (X - X^dagger)/2 minus trace.
Matrix su_projection(const Matrix& x);

}  // namespace monopole
