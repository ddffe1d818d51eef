#include "monopole/liealg.hpp"

#include <cmath>
#include <string>

#include "monopole/error.hpp"

namespace monopole {

Matrix::Matrix(int rank, std::initializer_list<cplx> entries) : rank_(rank), entries_(entries) {
  if (entries_.size() != static_cast<std::size_t>(rank * rank)) {
    throw Error(ErrorKind::invalid_argument, "Matrix: expected " + std::to_string(rank * rank) +
                                                 " entries, got " +
                                                 std::to_string(entries_.size()));
  }
}

Matrix Matrix::identity(int rank) {
  Matrix m(rank);
  for (int i = 0; i < rank; ++i) m(i, i) = 1.0;
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (o.rank_ != rank_) throw Error(ErrorKind::rank_mismatch, "Matrix +=: rank mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (o.rank_ != rank_) throw Error(ErrorKind::rank_mismatch, "Matrix -=: rank mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

Matrix& Matrix::operator*=(cplx s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

Matrix Matrix::adjoint() const {
  Matrix a(rank_);
  for (int r = 0; r < rank_; ++r)
    for (int c = 0; c < rank_; ++c) a(c, r) = std::conj((*this)(r, c));
  return a;
}

cplx Matrix::trace() const {
  cplx t = 0.0;
  for (int i = 0; i < rank_; ++i) t += (*this)(i, i);
  return t;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, cplx s) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.rank() != b.rank()) throw Error(ErrorKind::rank_mismatch, "Matrix *: rank mismatch");
  const int n = a.rank();
  Matrix c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) acc += a(i, j) * b(j, k);
      c(i, k) = acc;
    }
  return c;
}

double frobenius_norm(const Matrix& x) {
  double acc = 0.0;
  for (const auto& e : x.entries()) acc += std::norm(e);
  return std::sqrt(acc);
}

bool is_anti_hermitian(const Matrix& m, double tol) {
  return frobenius_norm(m + m.adjoint()) <= tol * std::max(1.0, frobenius_norm(m));
}

bool is_traceless(const Matrix& m, double tol) {
  return std::abs(m.trace()) <= tol * std::max(1.0, frobenius_norm(m));
}

cplx determinant(const Matrix& m) {
  const int n = m.rank();
  Matrix a = m;
  cplx det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const cplx f = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

bool is_special_unitary(const Matrix& g, double tol) {
  if (frobenius_norm(g * g.adjoint() - Matrix::identity(g.rank())) > tol) return false;
  return std::abs(determinant(g) - 1.0) <= tol;
}

LieMatrix::LieMatrix(Matrix m) : m_(std::move(m)) {
  if (!is_anti_hermitian(m_)) throw Error(ErrorKind::invalid_argument, "LieMatrix: not anti-Hermitian");
  if (!is_traceless(m_)) throw Error(ErrorKind::invalid_argument, "LieMatrix: not traceless");
}

Matrix bracket(const Matrix& x, const Matrix& y) {
  if (x.rank() != y.rank()) {
    throw Error(ErrorKind::rank_mismatch, "bracket: ranks " + std::to_string(x.rank()) + " and " +
                                              std::to_string(y.rank()));
  }
  return x * y - y * x;
}

LieMatrix bracket(const LieMatrix& x, const LieMatrix& y) {
  return LieMatrix(bracket(x.matrix(), y.matrix()));
}

Matrix lie_exp(const Matrix& x) {
  const int n = x.rank();
  const double norm = frobenius_norm(x);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = x * cplx(std::ldexp(1.0, -squarings));

  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled;
    term *= 1.0 / k;
    result += term;
    if (frobenius_norm(term) < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Matrix inverse(const Matrix& m) {
  const int n = m.rank();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) == 0.0) throw Error(ErrorKind::invalid_argument, "inverse: singular matrix");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a(col, c), a(pivot, c));
        std::swap(inv(col, c), inv(pivot, c));
      }
    const cplx p = a(col, col);
    for (int c = 0; c < n; ++c) {
      a(col, c) /= p;
      inv(col, c) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const cplx f = a(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

std::vector<Matrix> su_basis(int rank) {
  if (rank < 2) throw Error(ErrorKind::invalid_argument, "su_basis: rank must be >= 2");
  const cplx half_i(0.0, 0.5);
  std::vector<Matrix> basis;
  for (int j = 0; j < rank; ++j)
    for (int k = j + 1; k < rank; ++k) {
      Matrix sym(rank);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      basis.push_back(half_i * sym);
      Matrix asym(rank);
      asym(j, k) = cplx(0.0, -1.0);
      asym(k, j) = cplx(0.0, 1.0);
      basis.push_back(half_i * asym);
    }
  for (int l = 1; l < rank; ++l) {
    Matrix d(rank);
    const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int i = 0; i < l; ++i) d(i, i) = scale;
    d(l, l) = -l * scale;
    basis.push_back(half_i * d);
  }
  return basis;
}

Matrix su_projection(const Matrix& x) {
  Matrix p = 0.5 * (x - x.adjoint());
  const cplx tr = p.trace() / static_cast<double>(x.rank());
  for (int i = 0; i < x.rank(); ++i) p(i, i) -= tr;
  return p;
}

}  // namespace monopole
