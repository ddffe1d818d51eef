#include <fftw3.h>

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>

#include "fftw_planner.hpp"
#include "monopole/analysis.hpp"
#include "monopole/error.hpp"

namespace monopole {

double sobolev_norm(const LieField& w, double s, bool homogeneous) {
  const TorusGrid& g = w.grid();
  Spectrum c = fft(w);
  if (homogeneous && s < 0.0) {
    const double rms = l2_norm(w) / g.length();
    if (frobenius_norm(w.mean()) > 1e-10 * rms) {
      throw Error(ErrorKind::nonzero_mean, "sobolev_norm: homogeneous negative order needs mean zero");
    }
  }
  const auto tab = tables_for(g);
  std::vector<double> weight(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double a = tab->abs_xi[k];
    if (homogeneous) {
      weight[k] = a == 0.0 ? (s == 0.0 ? 1.0 : 0.0) : std::pow(a, s);
    } else {
      weight[k] = std::pow(1.0 + a * a, s / 2.0);
    }
  }
  c.multiply(std::span<const double>(weight));
  return l2_norm(c);
}

// ---------------------------------------------------------- SpaceTimeSample

SpaceTimeSample::SpaceTimeSample(TorusGrid grid, int rank, double duration, int frames, Window window)
    : grid_(grid), rank_(rank), duration_(duration), window_(window) {
  if (frames < 8) throw Error(ErrorKind::invalid_argument, "SpaceTimeSample: need at least 8 frames");
  if (!(duration > 0.0)) throw Error(ErrorKind::invalid_argument, "SpaceTimeSample: duration must be positive");
  frames_.assign(static_cast<std::size_t>(frames), LieField(grid, rank));
}

double SpaceTimeSample::window_weight(int m) const {
  if (window_ == Window::none) return 1.0;
  const double s = std::sin(std::numbers::pi * m / (frames() - 1));
  return s * s;
}

SpaceTimeSample SpaceTimeSample::from_function(TorusGrid grid, int rank, double duration, int frames,
                                               const std::function<LieField(double)>& fn, Window window) {
  SpaceTimeSample out(grid, rank, duration, frames, window);
  for (int m = 0; m < frames; ++m) {
    LieField f = fn(out.time(m));
    out.frames_[0].require_compatible(f, "SpaceTimeSample::from_function");
    f *= out.window_weight(m);
    out.frames_[static_cast<std::size_t>(m)] = std::move(f);
  }
  return out;
}

SpaceTimeSample SpaceTimeSample::map(const std::function<LieField(const LieField&)>& fn) const {
  SpaceTimeSample out(grid_, rank_, duration_, frames(), window_);
  for (int m = 0; m < frames(); ++m) out.frames_[static_cast<std::size_t>(m)] = fn(frame(m));
  return out;
}

SpaceTimeSample SpaceTimeSample::map(
    const SpaceTimeSample& other, const std::function<LieField(const LieField&, const LieField&)>& fn) const {
  if (other.frames() != frames() || other.duration_ != duration_ || !(other.grid_ == grid_)) {
    throw Error(ErrorKind::grid_mismatch, "SpaceTimeSample::map: samples differ in frames or grid");
  }
  SpaceTimeSample out(grid_, rank_, duration_, frames(), window_);
  for (int m = 0; m < frames(); ++m) out.frames_[static_cast<std::size_t>(m)] = fn(frame(m), other.frame(m));
  return out;
}

// ------------------------------------------------------ space-time transform

namespace {

class TimePlanCache {
 public:
  static TimePlanCache& instance() {
    static TimePlanCache cache;
    return cache;
  }

  // Transforms along the slowest index of an M x K array.
  fftw_plan get(int m, int k, int sign) {
    std::lock_guard lock(fftw_planner_mutex());
    auto key = std::make_tuple(m, k, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(m) * k);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    int n[] = {m};
    fftw_plan p = fftw_plan_many_dft(1, n, k, buf, nullptr, k, 1, buf, nullptr, k, 1, sign,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

// Frame-major array of space-time coefficients.
struct SpaceTimeSpectrum {
  int frames;
  std::size_t frame_size;  // planes * N^2
  std::vector<cplx> data;
  cplx* frame(int m) { return data.data() + static_cast<std::size_t>(m) * frame_size; }
};

SpaceTimeSpectrum transform(const SpaceTimeSample& ws) {
  const std::size_t fs = ws.grid().size() * static_cast<std::size_t>(ws.rank() * ws.rank());
  SpaceTimeSpectrum out{ws.frames(), fs, std::vector<cplx>(fs * static_cast<std::size_t>(ws.frames()))};
  for (int m = 0; m < ws.frames(); ++m) {
    const Spectrum c = fft(ws.frame(m));
    std::copy(c.values().begin(), c.values().end(), out.frame(m));
  }
  fftw_plan p = TimePlanCache::instance().get(ws.frames(), static_cast<int>(fs), FFTW_FORWARD);
  auto* buf = reinterpret_cast<fftw_complex*>(out.data.data());
  fftw_execute_dft(p, buf, buf);
  return out;
}

SpaceTimeSample inverse(SpaceTimeSpectrum c, const SpaceTimeSample& like) {
  fftw_plan p = TimePlanCache::instance().get(c.frames, static_cast<int>(c.frame_size), FFTW_BACKWARD);
  auto* buf = reinterpret_cast<fftw_complex*>(c.data.data());
  fftw_execute_dft(p, buf, buf);
  SpaceTimeSample out(like.grid(), like.rank(), like.duration(), like.frames(), like.window());
  const double scale = 1.0 / c.frames;
  for (int m = 0; m < c.frames; ++m) {
    Spectrum s(like.grid(), like.rank());
    std::copy(c.frame(m), c.frame(m) + c.frame_size, s.values().begin());
    s *= scale;
    out.frame(m) = ifft(s);
  }
  return out;
}

// |tau| for time index m of an M-frame sample with spacing dt.
double abs_tau(int m, int frames, double dt) {
  const int k = m < (frames + 1) / 2 ? m : m - frames;
  return 2.0 * std::numbers::pi * std::abs(k) / (frames * dt);
}

// sqrt(sum |weight(tau, xi) c|^2) with the continuum normalization.
double weighted_norm(const SpaceTimeSample& ws, const std::function<double(double, double)>& weight) {
  SpaceTimeSpectrum c = transform(ws);
  const TorusGrid& g = ws.grid();
  const auto tab = tables_for(g);
  const std::size_t pts = g.size();
  const int planes = ws.rank() * ws.rank();
  double sum = 0.0;
  for (int m = 0; m < c.frames; ++m) {
    const double tau = abs_tau(m, c.frames, ws.dt());
    const cplx* f = c.frame(m);
    for (std::size_t k = 0; k < pts; ++k) {
      const double w = weight(tau, tab->abs_xi[k]);
      double e = 0.0;
      for (int p = 0; p < planes; ++p) e += std::norm(f[static_cast<std::size_t>(p) * pts + k]);
      sum += w * w * e;
    }
  }
  const double dx = g.dx();
  const double n2 = static_cast<double>(pts);
  return std::sqrt(sum * ws.dt() * dx * dx / (c.frames * n2));
}

double wave_weight(double tau, double xi, double s, double theta) {
  return std::pow(1.0 + xi * xi, s / 2.0) * std::pow(1.0 + std::abs(tau - xi), theta);
}

}  // namespace

double wave_sobolev_norm(const SpaceTimeSample& ws, double s, double theta, WaveNorm variant) {
  if (variant == WaveNorm::H) {
    return weighted_norm(ws, [&](double tau, double xi) { return wave_weight(tau, xi, s, theta); });
  }
  const double h = weighted_norm(ws, [&](double tau, double xi) { return wave_weight(tau, xi, s, theta); });
  const double dt_part =
      weighted_norm(ws, [&](double tau, double xi) { return tau * wave_weight(tau, xi, s - 1.0, theta); });
  return h + dt_part;
}

SpaceTimeSample space_time_multiplier(const SpaceTimeSample& ws, double plus, double minus) {
  SpaceTimeSpectrum c = transform(ws);
  const auto tab = tables_for(ws.grid());
  const std::size_t pts = ws.grid().size();
  const int planes = ws.rank() * ws.rank();
  for (int m = 0; m < c.frames; ++m) {
    const double tau = abs_tau(m, c.frames, ws.dt());
    cplx* f = c.frame(m);
    for (std::size_t k = 0; k < pts; ++k) {
      const double xi = tab->abs_xi[k];
      const double w = std::pow(1.0 + tau * tau + xi * xi, plus / 2.0) * std::pow(1.0 + std::abs(tau - xi), minus);
      for (int p = 0; p < planes; ++p) f[static_cast<std::size_t>(p) * pts + k] *= w;
    }
  }
  return inverse(std::move(c), ws);
}

double mixed_norm(const SpaceTimeSample& ws, double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw Error(ErrorKind::invalid_argument, "mixed_norm: exponents must be >= 1");
  const TorusGrid& g = ws.grid();
  const double dx2 = g.dx() * g.dx();
  const int planes = ws.rank() * ws.rank();
  std::vector<double> spatial(static_cast<std::size_t>(ws.frames()));
  for (int m = 0; m < ws.frames(); ++m) {
    const LieField& f = ws.frame(m);
    double acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      double e = 0.0;
      for (int pl = 0; pl < planes; ++pl) e += std::norm(f.plane(pl)[k]);
      const double a = std::sqrt(e);
      acc = std::isinf(q) ? std::max(acc, a) : acc + std::pow(a, q);
    }
    spatial[static_cast<std::size_t>(m)] = std::isinf(q) ? acc : std::pow(acc * dx2, 1.0 / q);
  }
  if (std::isinf(p)) {
    double mx = 0.0;
    for (double v : spatial) mx = std::max(mx, v);
    return mx;
  }
  double acc = 0.0;
  for (double v : spatial) acc += std::pow(v, p);
  return std::pow(acc * ws.dt(), 1.0 / p);
}

}  // namespace monopole
