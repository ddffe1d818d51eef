#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "monopole/admissible.hpp"
#include "monopole/analysis.hpp"
#include "monopole/data.hpp"
#include "monopole/error.hpp"
#include "monopole/null_forms.hpp"
#include "monopole/parallel.hpp"

namespace monopole {

std::string_view estimate_kind_name(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::A: return "A";
    case EstimateKind::C: return "C";
    case EstimateKind::D: return "D";
    case EstimateKind::E: return "E";
    case EstimateKind::M1: return "M1";
    case EstimateKind::M2: return "M2";
    case EstimateKind::M3: return "M3";
    case EstimateKind::M4: return "M4";
    case EstimateKind::ell: return "ell";
    case EstimateKind::bound: return "bound";
  }
  return "?";
}

EstimateParams default_params(EstimateKind kind) {
  EstimateParams p;
  if (kind == EstimateKind::D) p.p = p.q = 8.0;
  return p;
}

namespace {

const SpaceTimeSample& need(const SpaceTimeSample* w, const char* name) {
  if (!w) throw Error(ErrorKind::invalid_argument, std::string("estimate_ratio: missing input ") + name);
  return *w;
}

void inadmissible(EstimateKind kind, const std::string& why) {
  throw Error(ErrorKind::inadmissible_params,
              "estimate_ratio(" + std::string(estimate_kind_name(kind)) + "): " + why);
}

void check_iteration(EstimateKind kind, const EstimateParams& p) {
  if (!iteration_params_admissible(p.s, p.epsilon, p.theta)) {
    inadmissible(kind, "(s, eps, theta) outside the iteration windows");
  }
}

void check_a0_norm(EstimateKind kind, const EstimateParams& p) {
  if (!inv_p_tilde_window(p.s).contains(p.inv_p_tilde)) inadmissible(kind, "1/p~ outside its window");
  if (!aspqs_inv_q_window(p.s).contains(p.inv_q_a)) inadmissible(kind, "1/q outside its window");
}

EstimateValue ratio_of(double lhs, double rhs) {
  if (!(rhs > 0.0) || !std::isfinite(rhs)) {
    throw Error(ErrorKind::degenerate_input, "estimate_ratio: right-hand side is zero");
  }
  return {lhs, rhs, lhs / rhs};
}

double h_norm(const SpaceTimeSample& w, double s, double theta) { return wave_sobolev_norm(w, s, theta); }

double grad_norm(const SpaceTimeSample& f, double s, double theta) {
  const double a = h_norm(f.map([](const LieField& x) { return partial_derivative(x, 1); }), s, theta);
  const double b = h_norm(f.map([](const LieField& x) { return partial_derivative(x, 2); }), s, theta);
  return std::hypot(a, b);
}

SpaceTimeSample solve_a0(const SpaceTimeSample& f, const SpaceTimeSample& phi, const EllipticOptions& opt) {
  return f.map(phi, [&](const LieField& x, const LieField& y) {
    return elliptic_solve_A0(partial_derivative(x, 1), partial_derivative(x, 2), y, nullptr, opt).a0;
  });
}

double a0_norm(const SpaceTimeSample& a0, const EstimateParams& p) {
  const Multiplier ds = Multiplier::homogeneous(p.s);
  const SpaceTimeSample d = a0.map([&](const LieField& x) { return apply_multiplier(x, ds); });
  const double inv_p = aspqs_inv_p(p.inv_q_a);
  return mixed_norm(a0, 1.0 / p.inv_p_tilde, std::numeric_limits<double>::infinity()) +
         mixed_norm(d, 1.0 / inv_p, 1.0 / p.inv_q_a);
}

double gain_norm(const SpaceTimeSample& w, const EstimateParams& p) {
  return h_norm(w, p.s, p.theta - 1.0 + p.epsilon);
}

}  // namespace

EstimateValue estimate_ratio(EstimateKind kind, const EstimateInputs& in, const EstimateParams& p) {
  switch (kind) {
    case EstimateKind::A: {
      const KTFlags k = kt_conditions({p.sigma, 1.0 / p.p, 1.0 / p.q, p.s1, p.s2});
      if (!k.all() || !(p.theta > 0.5) || std::isinf(p.q)) inadmissible(kind, "conditions c1-c4 or theta > 1/2 fail");
      const auto& u = need(in.u, "u");
      const auto& v = need(in.v, "v");
      const Multiplier dm = Multiplier::homogeneous(-p.sigma);
      const SpaceTimeSample uv =
          u.map(v, [&](const LieField& x, const LieField& y) { return apply_multiplier(product(x, y), dm); });
      return ratio_of(mixed_norm(uv, p.p, p.q), h_norm(u, p.s1, p.theta) * h_norm(v, p.s2, p.theta));
    }
    case EstimateKind::C: {
      if (!(p.p >= 2.0) || !(p.theta > 0.5)) inadmissible(kind, "need 2 <= p <= inf and theta > 1/2");
      const auto& u = need(in.u, "u");
      return ratio_of(mixed_norm(u, p.p, 2.0), h_norm(u, 0.0, p.theta));
    }
    case EstimateKind::D: {
      if (!(2.0 / p.p <= 0.5 - 1.0 / p.q) || !(p.q >= 2.0) || std::isinf(p.q) || !(p.theta > 0.5)) {
        inadmissible(kind, "need 2/p <= 1/2 - 1/q, 2 <= q < inf and theta > 1/2");
      }
      const auto& u = need(in.u, "u");
      return ratio_of(mixed_norm(u, p.p, p.q), h_norm(u, 1.0 - 2.0 / p.q - 1.0 / p.p, p.theta));
    }
    case EstimateKind::E: {
      if (!(p.a + p.b > 1.0) || !(p.alpha + p.beta > 0.5)) inadmissible(kind, "need a + b > 1 and alpha + beta > 1/2");
      const auto& u = need(in.u, "u");
      const auto& v = need(in.v, "v");
      const SpaceTimeSample uv = u.map(v, [](const LieField& x, const LieField& y) { return product(x, y); });
      return ratio_of(mixed_norm(uv, 2.0, 2.0), h_norm(u, p.a, p.alpha) * h_norm(v, p.b, p.beta));
    }
    case EstimateKind::M1: {
      check_iteration(kind, p);
      const auto& f = need(in.u, "f");
      const SpaceTimeSample q = f.map([](const LieField& x) {
        return bracket(partial_derivative(x, 1), partial_derivative(x, 2));
      });
      const double g = grad_norm(f, p.s, p.theta);
      return ratio_of(gain_norm(q, p), g * g);
    }
    case EstimateKind::M3: {
      check_iteration(kind, p);
      const auto& f = need(in.u, "f");
      const auto& phi = need(in.v, "phi");
      const SpaceTimeSample df = f.map([&](const LieField& x) { return partial_derivative(x, p.j); });
      const SpaceTimeSample c = df.map(phi, [](const LieField& x, const LieField& y) { return bracket(x, y); });
      return ratio_of(gain_norm(c, p), h_norm(df, p.s, p.theta) * h_norm(phi, p.s, p.theta));
    }
    case EstimateKind::M2:
    case EstimateKind::M4: {
      check_iteration(kind, p);
      check_a0_norm(kind, p);
      const auto& f = need(in.u, "f");
      const auto& phi = need(in.v, "phi");
      const SpaceTimeSample a0 = solve_a0(f, phi, p.elliptic);
      const SpaceTimeSample w =
          kind == EstimateKind::M2 ? phi : f.map([&](const LieField& x) { return partial_derivative(x, p.j); });
      const SpaceTimeSample prod = a0.map(w, [](const LieField& x, const LieField& y) { return product(x, y); });
      return ratio_of(gain_norm(prod, p), a0_norm(a0, p) * h_norm(w, p.s, p.theta));
    }
    case EstimateKind::ell: {
      check_iteration(kind, p);
      check_a0_norm(kind, p);
      const auto& f = need(in.u, "f");
      const auto& phi = need(in.v, "phi");
      const SpaceTimeSample a0 = solve_a0(f, phi, p.elliptic);
      return ratio_of(a0_norm(a0, p), grad_norm(f, p.s, p.theta) * h_norm(phi, p.s, p.theta));
    }
    case EstimateKind::bound: {
      check_iteration(kind, p);
      const auto& u = need(in.u, "u");
      const auto& v = need(in.v, "v");
      const auto& ut = need(in.ut, "ut");
      const auto& vt = need(in.vt, "vt");
      SpaceTimeSample bp(u.grid(), u.rank(), u.duration(), u.frames(), u.window());
      SpaceTimeSample bm = bp;
      EvolveOptions opt;
      opt.elliptic = p.elliptic;
      for (int m = 0; m < u.frames(); ++m) {
        AuxState s{u.frame(m), ut.frame(m), v.frame(m), vt.frame(m), u.time(m)};
        SourceEval ev = evaluate_sources(s, nullptr, opt);
        bp.frame(m) = std::move(ev.b.plus);
        bm.frame(m) = std::move(ev.b.minus);
      }
      const double lhs = std::max(
          wave_sobolev_norm(space_time_multiplier(bp, -1.0, -1.0 + p.epsilon), p.s + 1.0, p.theta, WaveNorm::calH),
          wave_sobolev_norm(space_time_multiplier(bm, -1.0, -1.0 + p.epsilon), p.s + 1.0, p.theta, WaveNorm::calH));
      const double rhs = wave_sobolev_norm(u, p.s + 1.0, p.theta, WaveNorm::calH) +
                         wave_sobolev_norm(v, p.s + 1.0, p.theta, WaveNorm::calH);
      return ratio_of(lhs, rhs);
    }
  }
  throw Error(ErrorKind::invalid_argument, "estimate_ratio: unknown kind");
}

RatioStats summarize(std::vector<double> ratios) {
  RatioStats st;
  st.ratios = std::move(ratios);
  if (st.ratios.empty()) return st;
  double sum = 0.0;
  for (double r : st.ratios) {
    st.max = std::max(st.max, r);
    sum += r;
  }
  st.mean = sum / static_cast<double>(st.ratios.size());
  return st;
}

// ------------------------------------------------------------- generators

namespace {

struct AuxSamples {
  SpaceTimeSample u, ut, v, vt;
};

// Free evolution of the wave variables from random Coulomb data.
AuxSamples random_aux(const EnsembleSpec& spec, std::uint64_t seed, Window window) {
  const TorusGrid& g = spec.grid;
  const LieField f0 = random_lie_field(g, 2, spec.amplitude, spec.bandwidth, 2 * seed);
  // scale f so that grad f has the requested amplitude
  const double gnorm = std::hypot(l2_norm(partial_derivative(f0, 1)), l2_norm(partial_derivative(f0, 2))) / g.length();
  LieField f = f0;
  f *= spec.amplitude / gnorm;
  const LieField phi0 = random_lie_field(g, 2, spec.amplitude, spec.bandwidth, 2 * seed + 1);
  const InitialData d = build_initial_data(-partial_derivative(f, 2), partial_derivative(f, 1), phi0);
  auto make = [&](const LieField& x0, const LieField& x1, bool rate) {
    return SpaceTimeSample::from_function(
        g, 2, spec.duration, spec.frames,
        [&](double t) {
          WaveState w = wave_propagate(x0, x1, t);
          return rate ? w.ut : w.u;
        },
        window);
  };
  return {make(d.aux.u, d.aux.ut, false), make(d.aux.u, d.aux.ut, true), make(d.aux.v, d.aux.vt, false),
          make(d.aux.v, d.aux.vt, true)};
}

// Physical (f, phi) of the free evolution of random data. Reconstruction
// runs on the unwindowed samples; the window is applied afterwards.
std::pair<SpaceTimeSample, SpaceTimeSample> random_physical(const EnsembleSpec& spec, std::uint64_t seed) {
  const AuxSamples s = random_aux(spec, seed, Window::none);
  SpaceTimeSample f(spec.grid, 2, spec.duration, spec.frames);
  SpaceTimeSample phi(spec.grid, 2, spec.duration, spec.frames);
  for (int m = 0; m < spec.frames; ++m) {
    const PhysState ps = reconstruct({s.u.frame(m), s.ut.frame(m), s.v.frame(m), s.vt.frame(m), s.u.time(m)});
    const double w = f.window_weight(m);
    f.frame(m) = w * ps.f;
    phi.frame(m) = w * ps.phi;
  }
  return {std::move(f), std::move(phi)};
}

}  // namespace

SpaceTimeSample random_free_wave(const EnsembleSpec& spec, std::uint64_t seed) {
  const LieField u0 = random_lie_field(spec.grid, 2, spec.amplitude, spec.bandwidth, 2 * seed);
  const LieField u1 = apply_multiplier(random_lie_field(spec.grid, 2, spec.amplitude, spec.bandwidth, 2 * seed + 1),
                                       Multiplier::homogeneous(1.0));
  return SpaceTimeSample::from_function(spec.grid, 2, spec.duration, spec.frames,
                                        [&](double t) { return wave_propagate(u0, u1, t).u; });
}

RatioStats sample_estimate(EstimateKind kind, const EnsembleSpec& spec, const EstimateParams& params, int count,
                           std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::invalid_argument, "sample_estimate: count must be positive");
  std::vector<double> ratios(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), 1, [&](std::size_t i) {
    const std::uint64_t base = seed * 1000003ULL + 2 * i;
    EstimateInputs in;
    switch (kind) {
      case EstimateKind::A:
      case EstimateKind::C:
      case EstimateKind::D:
      case EstimateKind::E: {
        const SpaceTimeSample u = random_free_wave(spec, base);
        const SpaceTimeSample v = random_free_wave(spec, base + 1);
        in.u = &u;
        in.v = &v;
        ratios[i] = estimate_ratio(kind, in, params).ratio;
        break;
      }
      case EstimateKind::bound: {
        const AuxSamples s = random_aux(spec, base, Window::hann);
        in = {&s.u, &s.v, &s.ut, &s.vt};
        ratios[i] = estimate_ratio(kind, in, params).ratio;
        break;
      }
      default: {
        const auto [f, phi] = random_physical(spec, base);
        in.u = &f;
        in.v = &phi;
        ratios[i] = estimate_ratio(kind, in, params).ratio;
        break;
      }
    }
  });
  return summarize(std::move(ratios));
}

// ------------------------------------------------------------- null-form gain

namespace {

// Gaussian envelope times a plane wave with integer carrier mode (kx, ky),
// propagated as a forward half wave exp(-i|xi|t).
struct Packet {
  LieField initial;
  std::shared_ptr<const GridTables> tab;

  LieField at(double t) const {
    Spectrum c = fft(initial);
    std::vector<cplx> phase(tab->abs_xi.size());
    for (std::size_t k = 0; k < phase.size(); ++k) phase[k] = std::exp(cplx(0.0, -tab->abs_xi[k] * t));
    c.multiply(std::span<const cplx>(phase));
    return ifft(c);
  }
};

Packet make_packet(const TorusGrid& g, int kx, int ky, double cx, double cy, double width, double phase) {
  const double unit = 2.0 * std::numbers::pi / g.length();
  LieField w = LieField(g, 1);
  for (int iy = 0; iy < g.points(); ++iy) {
    for (int ix = 0; ix < g.points(); ++ix) {
      // periodic distance to the center
      double dx = g.coordinate(ix) - cx, dy = g.coordinate(iy) - cy;
      dx -= g.length() * std::round(dx / g.length());
      dy -= g.length() * std::round(dy / g.length());
      const double env = std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
      w.plane(0)[static_cast<std::size_t>(iy) * g.points() + ix] =
          env * std::exp(cplx(0.0, unit * (kx * g.coordinate(ix) + ky * g.coordinate(iy)) + phase));
    }
  }
  return {std::move(w), tables_for(g)};
}

}  // namespace

NullGainRow null_form_gain(double lambda, int points, const EstimateParams& params, int count,
                           std::uint64_t seed) {
  if (!(lambda > 0.0) || count < 1) throw Error(ErrorKind::invalid_argument, "null_form_gain: bad lambda or count");
  check_iteration(EstimateKind::M1, params);
  const TorusGrid g(points, 2.0 * std::numbers::pi);
  const int k = static_cast<int>(std::lround(lambda / std::numbers::sqrt2));
  if (k + 1 >= points / 3) throw Error(ErrorKind::invalid_argument, "null_form_gain: lambda too large for grid");
  const int frames = 32;
  const double duration = 1.0;
  std::vector<double> nulls(static_cast<std::size_t>(count)), generics(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), 1, [&](std::size_t i) {
    std::mt19937_64 rng(seed * 1000003ULL + i);
    std::uniform_real_distribution<double> centre(std::numbers::pi - 0.5, std::numbers::pi + 0.5);
    std::uniform_real_distribution<double> width(0.4, 0.6);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::bernoulli_distribution axis(0.5);
    const double w = width(rng);
    const Packet p1 = make_packet(g, k, k, centre(rng), centre(rng), w, angle(rng));
    const bool shift_x = axis(rng);
    const Packet p2 = make_packet(g, k + (shift_x ? 1 : 0), k + (shift_x ? 0 : 1), centre(rng), centre(rng), w,
                                  angle(rng));
    const SpaceTimeSample f1 = SpaceTimeSample::from_function(g, 1, duration, frames,
                                                              [&](double t) { return p1.at(t); });
    // conjugate of a forward half wave: frequency -eta, time frequency +|eta|
    const SpaceTimeSample f2 = SpaceTimeSample::from_function(g, 1, duration, frames, [&](double t) {
      LieField x = p2.at(t);
      for (auto& z : x.values()) z = std::conj(z);
      return x;
    });
    const double denom = grad_norm(f1, params.s, params.theta) * grad_norm(f2, params.s, params.theta);
    const SpaceTimeSample q =
        f1.map(f2, [](const LieField& a, const LieField& b) { return null_form_Q12(a, b); });
    const SpaceTimeSample gen = f1.map(f2, [](const LieField& a, const LieField& b) {
      return product(partial_derivative(a, 1), partial_derivative(b, 2));
    });
    nulls[i] = gain_norm(q, params) / denom;
    generics[i] = gain_norm(gen, params) / denom;
  });
  const double n = summarize(nulls).mean;
  const double gm = summarize(generics).mean;
  return {lambda, n, gm, gm / n};
}

// ------------------------------------------------------------- scaling

PhysState rescale(const PhysState& s, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::invalid_argument, "rescale: lambda must be positive");
  }
  const TorusGrid g(s.phi.grid().points(), s.phi.grid().length() / lambda);
  auto move_to = [&](const LieField& x, double factor) {
    LieField y(g, x.rank(), x.label());
    std::copy(x.values().begin(), x.values().end(), y.values().begin());
    y *= factor;
    return y;
  };
  return {move_to(s.phi, lambda), move_to(s.f, 1.0),      move_to(s.d1f, lambda), move_to(s.d2f, lambda),
          move_to(s.a0, lambda),  s.t / lambda,           s.discarded};
}

ConsistencyReport scaling_residual(const std::vector<PhysState>& states, double dt, double lambda) {
  if (states.size() < 3) throw Error(ErrorKind::grid_mismatch, "scaling_residual: need at least three states");
  std::vector<PhysState> scaled;
  scaled.reserve(states.size());
  for (const auto& s : states) {
    if (!(s.phi.grid() == states.front().phi.grid())) {
      throw Error(ErrorKind::grid_mismatch, "scaling_residual: states live on different grids");
    }
    scaled.push_back(rescale(s, lambda));
  }
  return trajectory_residuals(scaled, dt / lambda);
}

}  // namespace monopole
