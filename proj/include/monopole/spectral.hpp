#pragma once
// Periodic grids, matrix-valued fields, and Fourier multipliers.
//
// Conventions: x = ix*dx along axis 1, y = iy*dx along axis 2; point (ix, iy)
// lives at offset iy*N + ix of each matrix-entry plane. The forward transform
// is the unnormalized DFT with kernel exp(-i xi.x), so d/dx_j has symbol
// i*xi_j. Frequencies are xi = (2*pi/L) * k with k in {-N/2, ..., N/2-1}.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "monopole/liealg.hpp"

namespace monopole {

class TorusGrid {
 public:
  TorusGrid(int points, double length);

  int points() const noexcept { return points_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return length_ / points_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(points_) * points_; }
  double coordinate(int i) const noexcept { return i * dx(); }
  // Signed integer mode for storage index i.
  int mode(int i) const noexcept { return i < points_ / 2 ? i : i - points_; }
  double wavenumber(int i) const noexcept;

  bool operator==(const TorusGrid&) const = default;

 private:
  int points_;
  double length_;
};

// Matrix-valued samples on a TorusGrid, stored as rank*rank planes (one per
// matrix entry, row-major entry order). Also carries group-valued fields.
class LieField {
 public:
  LieField(TorusGrid grid, int rank, std::string label = {});

  static LieField constant(TorusGrid grid, const Matrix& value, std::string label = {});
  static LieField sample(TorusGrid grid, int rank,
                         const std::function<Matrix(double x, double y)>& f,
                         std::string label = {});
  // Scalar profile times a fixed matrix.
  static LieField scalar_times(TorusGrid grid, const std::function<double(double, double)>& f,
                               const Matrix& generator, std::string label = {});

  const TorusGrid& grid() const noexcept { return grid_; }
  int rank() const noexcept { return rank_; }
  int planes() const noexcept { return rank_ * rank_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  std::span<cplx> plane(int entry);
  std::span<const cplx> plane(int entry) const;
  std::span<cplx> plane(int r, int c) { return plane(r * rank_ + c); }
  std::span<const cplx> plane(int r, int c) const { return plane(r * rank_ + c); }
  std::span<cplx> values() { return data_; }
  std::span<const cplx> values() const { return data_; }

  Matrix at(int ix, int iy) const;
  void set(int ix, int iy, const Matrix& m);

  Matrix mean() const;
  bool is_finite() const;

  LieField& operator+=(const LieField& o);
  LieField& operator-=(const LieField& o);
  LieField& operator*=(cplx s);
  // this += alpha * o
  LieField& add_scaled(cplx alpha, const LieField& o);

  void require_compatible(const LieField& o, const char* where) const;

 private:
  TorusGrid grid_;
  int rank_;
  std::string label_;
  std::vector<cplx> data_;
};

LieField operator+(LieField a, const LieField& b);
LieField operator-(LieField a, const LieField& b);
LieField operator-(LieField a);
LieField operator*(cplx s, LieField a);

// Pointwise matrix product and commutator (same grid and rank).
LieField product(const LieField& a, const LieField& b);
LieField bracket(const LieField& a, const LieField& b);
// Pointwise conjugate transpose.
LieField adjoint(const LieField& a);
// Pointwise matrix exponential.
LieField field_exp(const LieField& a);
// Largest pointwise Frobenius norm.
double sup_norm(const LieField& a);

// Fourier coefficients of a LieField, same layout. Separate type so spatial
// and spectral data cannot be mixed by accident.
class Spectrum {
 public:
  Spectrum(TorusGrid grid, int rank);

  const TorusGrid& grid() const noexcept { return grid_; }
  int rank() const noexcept { return rank_; }
  int planes() const noexcept { return rank_ * rank_; }
  std::span<cplx> plane(int entry);
  std::span<const cplx> plane(int entry) const;
  std::span<cplx> values() { return data_; }
  std::span<const cplx> values() const { return data_; }

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator-=(const Spectrum& o);
  Spectrum& operator*=(cplx s);
  Spectrum& add_scaled(cplx alpha, const Spectrum& o);
  // Pointwise in frequency, same table for every plane.
  Spectrum& multiply(std::span<const double> table);
  Spectrum& multiply(std::span<const cplx> table);

 private:
  TorusGrid grid_;
  int rank_;
  std::vector<cplx> data_;
};

Spectrum operator+(Spectrum a, const Spectrum& b);
Spectrum operator-(Spectrum a, const Spectrum& b);
Spectrum operator*(cplx s, Spectrum a);

Spectrum fft(const LieField& w);
LieField ifft(const Spectrum& w, std::string label = {});

// Frequency tables shared by every operator on one grid; built once per grid.
struct GridTables {
  std::vector<double> xi1, xi2, abs_xi;
  std::vector<cplx> i_xi1, i_xi2;          // derivative symbols, 0 on the Nyquist line
  std::vector<cplx> riesz1, riesz2;        // i xi_j / |xi|, zero mode and Nyquist line 0
  std::vector<double> inv_laplacian;       // -1/|xi|^2, zero mode 0
  std::vector<double> laplacian;           // -|xi|^2
  std::vector<double> dealias;             // 2/3-rule mask
};
std::shared_ptr<const GridTables> tables_for(const TorusGrid& grid);

enum class ZeroModePolicy { zero, identity, explicit_value };

struct Multiplier {
  std::function<cplx(double xi1, double xi2)> symbol;
  ZeroModePolicy zero_mode = ZeroModePolicy::zero;
  cplx zero_value = 0.0;
  std::string name;
  // Axis along which the symbol is odd (1 or 2), 0 if none. Odd symbols are
  // set to zero on that axis's Nyquist line.
  int odd_axis = 0;

  static Multiplier identity();
  static Multiplier derivative(int axis);
  static Multiplier riesz(int axis);
  static Multiplier inverse_laplacian();
  // (1+|xi|^2)^{s/2}
  static Multiplier bessel(double s);
  // |xi|^s; negative orders annihilate the zero mode.
  static Multiplier homogeneous(double s);
};

// Table of symbol values at every lattice frequency, zero mode per policy.
// Throws Error{non_finite} if the symbol is not finite where needed.
std::vector<cplx> symbol_table(const TorusGrid& grid, const Multiplier& m);

LieField apply_multiplier(const LieField& w, const Multiplier& m);

// axis is 1 or 2.
LieField partial_derivative(const LieField& w, int axis);
LieField riesz(const LieField& w, int axis);
LieField laplacian(const LieField& w);
// Throws Error{nonzero_mean} when |mean| exceeds 1e-10 of the field's RMS.
LieField inverse_laplacian(const LieField& w);
void dealias(LieField& w);

// Continuum-normalized discrete L^2 norm: sqrt(dx^2 * sum |w|_F^2).
double l2_norm(const LieField& w);
// Same norm evaluated from the coefficients (Parseval).
double l2_norm(const Spectrum& w);

struct WaveState {
  LieField u;
  LieField ut;
};

// Exact solution of u_tt = Laplacian u after time t.
WaveState wave_propagate(const LieField& u0, const LieField& u1, double t);

// One step of (-d_t^2 + Laplacian) u = B with the source frozen at the
// supplied sample: exact propagator plus exact integral of the Duhamel kernel
// against the constant source. Fed with the midpoint sample this is the
// second-order exponential midpoint rule.
WaveState duhamel_step(const WaveState& state, const LieField& source, double dt);

// Midpoint quadrature against a time-dependent source B(t), t0 the step start.
WaveState duhamel_step(const WaveState& state, const std::function<LieField(double)>& source,
                       double t0, double dt);

// ||grad u||^2 + ||u_t||^2
double wave_energy(const WaveState& s);

}  // namespace monopole
