#include "monopole/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "monopole/error.hpp"
#include "monopole/parallel.hpp"
#include "monopole/simd/kernels.hpp"
#include "fftw_planner.hpp"

namespace monopole {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// fftw planning is not thread-safe; execution with new-array calls is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(fftw_planner_mutex());
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(n) * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

void transform_planes(std::span<cplx> data, std::size_t plane_size, int n, int planes, int sign) {
  fftw_plan plan = PlanCache::instance().get(n, sign);
  parallel_for(static_cast<std::size_t>(planes), plane_size >= 128 * 128 ? 1 : 64,
               [&](std::size_t p) {
                 auto* ptr = reinterpret_cast<fftw_complex*>(data.data() + p * plane_size);
                 fftw_execute_dft(plan, ptr, ptr);
               });
}

}  // namespace

// ---------------------------------------------------------------- TorusGrid

TorusGrid::TorusGrid(int points, double length) : points_(points), length_(length) {
  if (points < 8 || !is_power_of_two(points)) {
    throw Error(ErrorKind::invalid_argument,
                "TorusGrid: N must be a power of two >= 8, got " + std::to_string(points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorKind::invalid_argument, "TorusGrid: L must be positive");
  }
}

double TorusGrid::wavenumber(int i) const noexcept {
  return 2.0 * std::numbers::pi / length_ * mode(i);
}

// ---------------------------------------------------------------- LieField

LieField::LieField(TorusGrid grid, int rank, std::string label)
    : grid_(grid), rank_(rank), label_(std::move(label)),
      data_(grid.size() * static_cast<std::size_t>(rank * rank)) {
  if (rank < 1) throw Error(ErrorKind::invalid_argument, "LieField: rank must be positive");
}

LieField LieField::constant(TorusGrid grid, const Matrix& value, std::string label) {
  LieField w(grid, value.rank(), std::move(label));
  for (int e = 0; e < w.planes(); ++e) {
    auto p = w.plane(e);
    std::fill(p.begin(), p.end(), value.entries()[static_cast<std::size_t>(e)]);
  }
  return w;
}

LieField LieField::sample(TorusGrid grid, int rank,
                          const std::function<Matrix(double, double)>& f, std::string label) {
  LieField w(grid, rank, std::move(label));
  const int n = grid.points();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) w.set(ix, iy, f(grid.coordinate(ix), grid.coordinate(iy)));
  return w;
}

LieField LieField::scalar_times(TorusGrid grid, const std::function<double(double, double)>& f,
                                const Matrix& generator, std::string label) {
  LieField w(grid, generator.rank(), std::move(label));
  const int n = grid.points();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double s = f(grid.coordinate(ix), grid.coordinate(iy));
      const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
      for (int e = 0; e < w.planes(); ++e) w.plane(e)[k] = s * generator.entries()[static_cast<std::size_t>(e)];
    }
  return w;
}

std::span<cplx> LieField::plane(int entry) {
  return std::span<cplx>(data_).subspan(static_cast<std::size_t>(entry) * grid_.size(), grid_.size());
}

std::span<const cplx> LieField::plane(int entry) const {
  return std::span<const cplx>(data_).subspan(static_cast<std::size_t>(entry) * grid_.size(),
                                              grid_.size());
}

Matrix LieField::at(int ix, int iy) const {
  Matrix m(rank_);
  const std::size_t k = static_cast<std::size_t>(iy) * grid_.points() + ix;
  for (int r = 0; r < rank_; ++r)
    for (int c = 0; c < rank_; ++c) m(r, c) = plane(r, c)[k];
  return m;
}

void LieField::set(int ix, int iy, const Matrix& m) {
  if (m.rank() != rank_) throw Error(ErrorKind::rank_mismatch, "LieField::set: rank mismatch");
  const std::size_t k = static_cast<std::size_t>(iy) * grid_.points() + ix;
  for (int r = 0; r < rank_; ++r)
    for (int c = 0; c < rank_; ++c) plane(r, c)[k] = m(r, c);
}

Matrix LieField::mean() const {
  Matrix m(rank_);
  for (int r = 0; r < rank_; ++r)
    for (int c = 0; c < rank_; ++c) {
      cplx acc = 0.0;
      for (const cplx& v : plane(r, c)) acc += v;
      m(r, c) = acc / static_cast<double>(grid_.size());
    }
  return m;
}

bool LieField::is_finite() const {
  for (const cplx& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

void LieField::require_compatible(const LieField& o, const char* where) const {
  if (o.rank_ != rank_) throw Error(ErrorKind::rank_mismatch, std::string(where) + ": rank mismatch");
  if (!(o.grid_ == grid_)) throw Error(ErrorKind::grid_mismatch, std::string(where) + ": grid mismatch");
}

LieField& LieField::operator+=(const LieField& o) { return add_scaled(1.0, o); }
LieField& LieField::operator-=(const LieField& o) { return add_scaled(-1.0, o); }

LieField& LieField::operator*=(cplx s) {
  for (cplx& v : data_) v *= s;
  return *this;
}

LieField& LieField::add_scaled(cplx alpha, const LieField& o) {
  require_compatible(o, "LieField");
  simd::axpy(alpha, o.data_, data_);
  return *this;
}

LieField operator+(LieField a, const LieField& b) { return a += b; }
LieField operator-(LieField a, const LieField& b) { return a -= b; }
LieField operator-(LieField a) { return a *= -1.0; }
LieField operator*(cplx s, LieField a) { return a *= s; }

LieField product(const LieField& a, const LieField& b) {
  a.require_compatible(b, "product");
  const int n = a.rank();
  LieField out(a.grid(), n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k) simd::cmul_acc(out.plane(r, c), a.plane(r, k), b.plane(k, c), 1.0);
  return out;
}

LieField bracket(const LieField& a, const LieField& b) {
  a.require_compatible(b, "bracket");
  const int n = a.rank();
  LieField out(a.grid(), n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k) {
        simd::cmul_acc(out.plane(r, c), a.plane(r, k), b.plane(k, c), 1.0);
        simd::cmul_acc(out.plane(r, c), b.plane(r, k), a.plane(k, c), -1.0);
      }
  return out;
}

LieField adjoint(const LieField& a) {
  const int n = a.rank();
  LieField out(a.grid(), n, a.label());
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      auto src = a.plane(c, r);
      auto dst = out.plane(r, c);
      for (std::size_t k = 0; k < src.size(); ++k) dst[k] = std::conj(src[k]);
    }
  return out;
}

LieField field_exp(const LieField& a) {
  LieField out(a.grid(), a.rank(), a.label());
  const int n = a.grid().points();
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) out.set(ix, iy, lie_exp(a.at(ix, iy)));
  return out;
}

double sup_norm(const LieField& a) {
  std::vector<double> acc(a.grid().size(), 0.0);
  for (int e = 0; e < a.planes(); ++e) {
    auto p = a.plane(e);
    for (std::size_t k = 0; k < p.size(); ++k) acc[k] += std::norm(p[k]);
  }
  double m = 0.0;
  for (double v : acc) m = std::max(m, v);
  return std::sqrt(m);
}

// ---------------------------------------------------------------- Spectrum

Spectrum::Spectrum(TorusGrid grid, int rank)
    : grid_(grid), rank_(rank), data_(grid.size() * static_cast<std::size_t>(rank * rank)) {}

std::span<cplx> Spectrum::plane(int entry) {
  return std::span<cplx>(data_).subspan(static_cast<std::size_t>(entry) * grid_.size(), grid_.size());
}

std::span<const cplx> Spectrum::plane(int entry) const {
  return std::span<const cplx>(data_).subspan(static_cast<std::size_t>(entry) * grid_.size(),
                                              grid_.size());
}

Spectrum& Spectrum::operator+=(const Spectrum& o) { return add_scaled(1.0, o); }
Spectrum& Spectrum::operator-=(const Spectrum& o) { return add_scaled(-1.0, o); }

Spectrum& Spectrum::operator*=(cplx s) {
  for (cplx& v : data_) v *= s;
  return *this;
}

Spectrum& Spectrum::add_scaled(cplx alpha, const Spectrum& o) {
  if (o.rank_ != rank_ || !(o.grid_ == grid_)) {
    throw Error(ErrorKind::grid_mismatch, "Spectrum: incompatible operands");
  }
  simd::axpy(alpha, o.data_, data_);
  return *this;
}

Spectrum& Spectrum::multiply(std::span<const double> table) {
  for (int e = 0; e < planes(); ++e) simd::mul_real(plane(e), table);
  return *this;
}

Spectrum& Spectrum::multiply(std::span<const cplx> table) {
  for (int e = 0; e < planes(); ++e) simd::mul_complex(plane(e), table);
  return *this;
}

Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
Spectrum operator*(cplx s, Spectrum a) { return a *= s; }

Spectrum fft(const LieField& w) {
  Spectrum out(w.grid(), w.rank());
  std::copy(w.values().begin(), w.values().end(), out.values().begin());
  transform_planes(out.values(), w.grid().size(), w.grid().points(), w.planes(), FFTW_FORWARD);
  return out;
}

LieField ifft(const Spectrum& w, std::string label) {
  LieField out(w.grid(), w.rank(), std::move(label));
  std::copy(w.values().begin(), w.values().end(), out.values().begin());
  transform_planes(out.values(), w.grid().size(), w.grid().points(), w.planes(), FFTW_BACKWARD);
  out *= 1.0 / static_cast<double>(w.grid().size());
  return out;
}

// ---------------------------------------------------------------- tables

std::shared_ptr<const GridTables> tables_for(const TorusGrid& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const GridTables>> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(grid.points(), grid.length());
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto t = std::make_shared<GridTables>();
  const int n = grid.points();
  const std::size_t size = grid.size();
  t->xi1.resize(size);
  t->xi2.resize(size);
  t->abs_xi.resize(size);
  t->i_xi1.resize(size);
  t->i_xi2.resize(size);
  t->riesz1.resize(size);
  t->riesz2.resize(size);
  t->inv_laplacian.resize(size);
  t->laplacian.resize(size);
  t->dealias.resize(size);
  const int cutoff = n / 3;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
      const double a = grid.wavenumber(ix), b = grid.wavenumber(iy);
      const double r2 = a * a + b * b;
      const double r = std::sqrt(r2);
      t->xi1[k] = a;
      t->xi2[k] = b;
      t->abs_xi[k] = r;
      // Odd symbols vanish on the Nyquist line of their axis, which has no
      // conjugate partner; otherwise real fields would pick up an imaginary part.
      const double oa = ix == n / 2 ? 0.0 : a;
      const double ob = iy == n / 2 ? 0.0 : b;
      t->i_xi1[k] = cplx(0.0, oa);
      t->i_xi2[k] = cplx(0.0, ob);
      t->riesz1[k] = r > 0 ? cplx(0.0, oa / r) : 0.0;
      t->riesz2[k] = r > 0 ? cplx(0.0, ob / r) : 0.0;
      t->inv_laplacian[k] = r > 0 ? -1.0 / r2 : 0.0;
      t->laplacian[k] = -r2;
      t->dealias[k] = (std::abs(grid.mode(ix)) <= cutoff && std::abs(grid.mode(iy)) <= cutoff) ? 1.0 : 0.0;
    }
  cache.emplace(key, t);
  return t;
}

// ---------------------------------------------------------------- multipliers

Multiplier Multiplier::identity() {
  return {[](double, double) { return cplx(1.0); }, ZeroModePolicy::identity, 0.0, "identity"};
}

Multiplier Multiplier::derivative(int axis) {
  if (axis != 1 && axis != 2) throw Error(ErrorKind::invalid_argument, "derivative: axis must be 1 or 2");
  return {[axis](double a, double b) { return cplx(0.0, axis == 1 ? a : b); }, ZeroModePolicy::zero, 0.0,
          "d" + std::to_string(axis), axis};
}

Multiplier Multiplier::riesz(int axis) {
  if (axis != 1 && axis != 2) throw Error(ErrorKind::invalid_argument, "riesz: axis must be 1 or 2");
  return {[axis](double a, double b) { return cplx(0.0, (axis == 1 ? a : b) / std::hypot(a, b)); },
          ZeroModePolicy::zero, 0.0, "R" + std::to_string(axis), axis};
}

Multiplier Multiplier::inverse_laplacian() {
  return {[](double a, double b) { return cplx(-1.0 / (a * a + b * b)); }, ZeroModePolicy::zero, 0.0,
          "inverse_laplacian"};
}

Multiplier Multiplier::bessel(double s) {
  return {[s](double a, double b) { return cplx(std::pow(1.0 + a * a + b * b, 0.5 * s)); },
          ZeroModePolicy::identity, 0.0, "Lambda^" + std::to_string(s)};
}

Multiplier Multiplier::homogeneous(double s) {
  Multiplier m{[s](double a, double b) { return cplx(std::pow(std::hypot(a, b), s)); },
               ZeroModePolicy::zero, 0.0, "D^" + std::to_string(s)};
  if (s == 0.0) m.zero_mode = ZeroModePolicy::identity;
  return m;
}

std::vector<cplx> symbol_table(const TorusGrid& grid, const Multiplier& m) {
  const int n = grid.points();
  std::vector<cplx> table(grid.size());
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
      if (ix == 0 && iy == 0) {
        switch (m.zero_mode) {
          case ZeroModePolicy::zero: table[k] = 0.0; break;
          case ZeroModePolicy::identity: table[k] = 1.0; break;
          case ZeroModePolicy::explicit_value: table[k] = m.zero_value; break;
        }
        continue;
      }
      if ((m.odd_axis == 1 && ix == n / 2) || (m.odd_axis == 2 && iy == n / 2)) {
        table[k] = 0.0;
        continue;
      }
      const cplx v = m.symbol(grid.wavenumber(ix), grid.wavenumber(iy));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw Error(ErrorKind::non_finite, "multiplier " + m.name + ": non-finite symbol at mode (" +
                                               std::to_string(grid.mode(ix)) + ", " +
                                               std::to_string(grid.mode(iy)) + ")");
      }
      table[k] = v;
    }
  return table;
}

LieField apply_multiplier(const LieField& w, const Multiplier& m) {
  if (!w.is_finite()) throw Error(ErrorKind::non_finite, "apply_multiplier: input not finite");
  const auto table = symbol_table(w.grid(), m);
  Spectrum s = fft(w);
  s.multiply(std::span<const cplx>(table));
  return ifft(s, w.label());
}

LieField partial_derivative(const LieField& w, int axis) {
  if (axis != 1 && axis != 2) throw Error(ErrorKind::invalid_argument, "partial_derivative: axis must be 1 or 2");
  const auto t = tables_for(w.grid());
  Spectrum s = fft(w);
  s.multiply(std::span<const cplx>(axis == 1 ? t->i_xi1 : t->i_xi2));
  return ifft(s);
}

LieField riesz(const LieField& w, int axis) {
  if (axis != 1 && axis != 2) throw Error(ErrorKind::invalid_argument, "riesz: axis must be 1 or 2");
  const auto t = tables_for(w.grid());
  Spectrum s = fft(w);
  s.multiply(std::span<const cplx>(axis == 1 ? t->riesz1 : t->riesz2));
  return ifft(s);
}

LieField laplacian(const LieField& w) {
  const auto t = tables_for(w.grid());
  Spectrum s = fft(w);
  s.multiply(std::span<const double>(t->laplacian));
  return ifft(s);
}

LieField inverse_laplacian(const LieField& w) {
  const double rms = l2_norm(w) / w.grid().length();
  const double mean = frobenius_norm(w.mean());
  if (mean > 1e-10 * rms) {
    throw Error(ErrorKind::nonzero_mean,
                "inverse_laplacian: input mean " + std::to_string(mean) + " is not zero");
  }
  const auto t = tables_for(w.grid());
  Spectrum s = fft(w);
  s.multiply(std::span<const double>(t->inv_laplacian));
  return ifft(s);
}

void dealias(LieField& w) {
  const auto t = tables_for(w.grid());
  Spectrum s = fft(w);
  s.multiply(std::span<const double>(t->dealias));
  w = ifft(s, w.label());
}

double l2_norm(const LieField& w) {
  const double dx = w.grid().dx();
  return std::sqrt(dx * dx * simd::sum_abs2(w.values()));
}

double l2_norm(const Spectrum& w) {
  const double dx = w.grid().dx();
  return std::sqrt(dx * dx * simd::sum_abs2(w.values()) / static_cast<double>(w.grid().size()));
}

// ---------------------------------------------------------------- wave propagation

WaveState wave_propagate(const LieField& u0, const LieField& u1, double t) {
  u0.require_compatible(u1, "wave_propagate");
  const auto tab = tables_for(u0.grid());
  const Spectrum a = fft(u0);
  const Spectrum b = fft(u1);
  Spectrum u(u0.grid(), u0.rank()), ut(u0.grid(), u0.rank());
  const std::size_t size = u0.grid().size();
  std::vector<double> c(size), s_over(size), minus_ws(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double w = tab->abs_xi[k];
    c[k] = std::cos(w * t);
    s_over[k] = w > 0 ? std::sin(w * t) / w : t;
    minus_ws[k] = -w * std::sin(w * t);
  }
  for (int e = 0; e < u.planes(); ++e) {
    auto pu = u.plane(e), put = ut.plane(e);
    auto pa = a.plane(e), pb = b.plane(e);
    for (std::size_t k = 0; k < size; ++k) {
      pu[k] = c[k] * pa[k] + s_over[k] * pb[k];
      put[k] = minus_ws[k] * pa[k] + c[k] * pb[k];
    }
  }
  return {ifft(u, u0.label()), ifft(ut, u1.label())};
}

WaveState duhamel_step(const WaveState& state, const LieField& source, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "duhamel_step: dt must be positive");
  if (!source.is_finite()) throw Error(ErrorKind::non_finite, "duhamel_step: source not finite");
  state.u.require_compatible(state.ut, "duhamel_step");
  state.u.require_compatible(source, "duhamel_step");
  const auto tab = tables_for(state.u.grid());
  const Spectrum a = fft(state.u);
  const Spectrum b = fft(state.ut);
  const Spectrum f = fft(source);
  Spectrum u(a.grid(), a.rank()), ut(a.grid(), a.rank());
  const std::size_t size = a.grid().size();
  // u_tt + |xi|^2 u = -B
  for (int e = 0; e < u.planes(); ++e) {
    auto pu = u.plane(e), put = ut.plane(e);
    auto pa = a.plane(e), pb = b.plane(e), pf = f.plane(e);
    for (std::size_t k = 0; k < size; ++k) {
      const double w = tab->abs_xi[k];
      double c, s_over, one_minus_c_over, minus_ws;
      if (w > 0) {
        c = std::cos(w * dt);
        const double s = std::sin(w * dt);
        s_over = s / w;
        // 1 - cos(x) = 2 sin^2(x/2), avoids cancellation for small w*dt
        const double h = std::sin(0.5 * w * dt);
        one_minus_c_over = 2.0 * h * h / (w * w);
        minus_ws = -w * s;
      } else {
        c = 1.0;
        s_over = dt;
        one_minus_c_over = 0.5 * dt * dt;
        minus_ws = 0.0;
      }
      pu[k] = c * pa[k] + s_over * pb[k] - one_minus_c_over * pf[k];
      put[k] = minus_ws * pa[k] + c * pb[k] - s_over * pf[k];
    }
  }
  return {ifft(u, state.u.label()), ifft(ut, state.ut.label())};
}

WaveState duhamel_step(const WaveState& state, const std::function<LieField(double)>& source,
                       double t0, double dt) {
  return duhamel_step(state, source(t0 + 0.5 * dt), dt);
}

double wave_energy(const WaveState& s) {
  const double g1 = l2_norm(partial_derivative(s.u, 1));
  const double g2 = l2_norm(partial_derivative(s.u, 2));
  const double v = l2_norm(s.ut);
  return g1 * g1 + g2 * g2 + v * v;
}

}  // namespace monopole
