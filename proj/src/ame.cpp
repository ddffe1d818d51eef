#include "monopole/ame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "monopole/error.hpp"
#include "monopole/null_forms.hpp"

namespace monopole {

namespace {

// su(n) part of every point: (X - X^dagger)/2 minus its trace.
LieField su_part(const LieField& x, double& discarded) {
  const int n = x.rank();
  LieField y = x;
  y -= adjoint(x);
  y *= 0.5;
  const std::size_t size = x.grid().size();
  for (std::size_t k = 0; k < size; ++k) {
    cplx tr = 0.0;
    for (int i = 0; i < n; ++i) tr += y.plane(i, i)[k];
    tr /= static_cast<double>(n);
    for (int i = 0; i < n; ++i) y.plane(i, i)[k] -= tr;
  }
  const double total = l2_norm(x);
  const double removed = l2_norm(x - y);
  discarded = total > 0 ? removed / total : 0.0;
  y.set_label(x.label());
  return y;
}

LieField physical(const LieField& x, const char* name, double& worst) {
  double d = 0.0;
  LieField y = su_part(x, d);
  if (d > 1e-6) {
    throw Error(ErrorKind::unphysical_component,
                std::string("reconstruct: ") + name + " has a non-su(n) part of relative size " +
                    std::to_string(d));
  }
  worst = std::max(worst, d);
  return y;
}

// R_1 x + sign * R_2 y in one pass.
LieField riesz_sum(const LieField& x, const LieField& y, double sign) {
  const auto tab = tables_for(x.grid());
  Spectrum a = fft(x);
  a.multiply(std::span<const cplx>(tab->riesz1));
  Spectrum b = fft(y);
  b.multiply(std::span<const cplx>(tab->riesz2));
  a.add_scaled(sign, b);
  return ifft(a);
}

double relative(const LieField& lhs, const LieField& rhs) {
  const double scale = l2_norm(lhs) + l2_norm(rhs);
  return scale > 0 ? l2_norm(lhs - rhs) / scale : 0.0;
}

LieField mean_free(LieField w) {
  w -= LieField::constant(w.grid(), w.mean());
  return w;
}

// The spatial components carry a spatially constant defect: A = *df has no
// harmonic part on the torus, so the zero mode of those equations is not
// part of the reduced system. Compare mean-free parts.
double relative_mean_free(const LieField& lhs, const LieField& rhs) {
  return relative(mean_free(lhs), mean_free(rhs));
}

void check_finite(const AuxState& s, double cap) {
  for (const LieField* w : {&s.u, &s.ut, &s.v, &s.vt}) {
    if (!w->is_finite() || l2_norm(*w) > cap) {
      throw Error(ErrorKind::blow_up, "evolve: field norm exceeded " + std::to_string(cap) +
                                          " at t = " + std::to_string(s.t));
    }
  }
}

}  // namespace

AuxState AuxState::zero(TorusGrid grid, int rank) {
  return {LieField(grid, rank, "u"), LieField(grid, rank, "ut"), LieField(grid, rank, "v"),
          LieField(grid, rank, "vt"), 0.0};
}

Connection PhysState::connection() const { return {a0, -d2f, d1f}; }

InitialData build_initial_data(const LieField& a1, const LieField& a2, const LieField& phi0, double tol_c) {
  a1.require_compatible(a2, "build_initial_data");
  a1.require_compatible(phi0, "build_initial_data");
  const double scale = l2_norm(a1) + l2_norm(a2);
  for (const LieField* a : {&a1, &a2}) {
    const double rms = l2_norm(*a) / a->grid().length();
    if (frobenius_norm(a->mean()) > 1e-10 * std::max(rms, std::numeric_limits<double>::min())) {
      throw Error(ErrorKind::nonzero_mean, "build_initial_data: connection data has a nonzero mean");
    }
  }
  const double div = l2_norm(divergence(a1, a2));
  if (div > tol_c * scale) {
    throw Error(ErrorKind::coulomb_violated, "build_initial_data: ||div a|| / ||a|| = " +
                                                 std::to_string(div / scale) + " exceeds tol_c");
  }

  LieField h = riesz_sum(a2, a1, -1.0);
  LieField f0 = inverse_laplacian(partial_derivative(a2, 1) - partial_derivative(a1, 2));
  f0.set_label("f0");
  h.set_label("h");

  AuxState aux = AuxState::zero(a1.grid(), a1.rank());
  aux.ut = phi0;
  aux.ut.add_scaled(kRieszPhase, h);
  aux.vt = phi0;
  aux.vt.add_scaled(-kRieszPhase, h);
  aux.ut.set_label("ut");
  aux.vt.set_label("vt");
  return {std::move(aux), std::move(f0), std::move(h)};
}

PhysState reconstruct(const AuxState& s) {
  s.u.require_compatible(s.v, "reconstruct");
  const TorusGrid grid = s.u.grid();
  const auto tab = tables_for(grid);
  const std::size_t size = grid.size();

  // P = (d_t + iD)u, Q = (d_t - iD)v
  Spectrum p = fft(s.u);
  p.multiply(std::span<const double>(tab->abs_xi));
  p *= cplx(0.0, 1.0);
  p += fft(s.ut);
  Spectrum q = fft(s.v);
  q.multiply(std::span<const double>(tab->abs_xi));
  q *= cplx(0.0, -1.0);
  q += fft(s.vt);

  Spectrum phi = p + q;
  phi *= 0.5;
  Spectrum df = p - q;  // D f = kappa * (P - Q) / 2
  df *= 0.5 * kRieszPhase;

  std::vector<double> inv_abs(size);
  for (std::size_t k = 0; k < size; ++k) inv_abs[k] = tab->abs_xi[k] > 0 ? 1.0 / tab->abs_xi[k] : 0.0;
  Spectrum f = df;
  f.multiply(std::span<const double>(inv_abs));
  Spectrum d1 = df;
  d1.multiply(std::span<const cplx>(tab->riesz1));
  Spectrum d2 = df;
  d2.multiply(std::span<const cplx>(tab->riesz2));

  PhysState out{LieField(grid, s.u.rank()), LieField(grid, s.u.rank()), LieField(grid, s.u.rank()),
                LieField(grid, s.u.rank()), LieField(grid, s.u.rank(), "A0"), s.t, 0.0};
  out.phi = physical(ifft(phi, "phi"), "phi", out.discarded);
  out.f = physical(ifft(f, "f"), "f", out.discarded);
  out.d1f = physical(ifft(d1, "d1f"), "d1f", out.discarded);
  out.d2f = physical(ifft(d2, "d2f"), "d2f", out.discarded);
  return out;
}

LieField nonlinearity_B(int kind, const PhysState& st, const AuxState* aux, B2Path path) {
  switch (kind) {
    case 1:
      return bracket(st.d1f, st.d2f);
    case 2: {
      if (path == B2Path::fields) return riesz_sum(bracket(st.d2f, st.phi), bracket(st.d1f, st.phi), -1.0);
      if (!aux) throw Error(ErrorKind::invalid_argument, "nonlinearity_B: the waves path needs the aux state");
      // 4[d_j f, phi] = kappa([R_j P, P] - [R_j Q, Q] + [R_j P, Q] + [P, R_j Q])
      const LieField p = half_wave(aux->u, aux->ut, +1);
      const LieField q = half_wave(aux->v, aux->vt, -1);
      auto df_phi = [&](int j) {
        LieField w = bracket(riesz(p, j), p);
        w -= bracket(riesz(q, j), q);
        w += null_form_Q(aux->u, aux->ut, aux->v, aux->vt, j, QVariant::opposite_sign_plus, +1,
                         QCombine::commutator);
        w *= 0.25 * kRieszPhase;
        return w;
      };
      return riesz_sum(df_phi(2), df_phi(1), -1.0);
    }
    case 3:
      return bracket(st.a0, st.phi);
    case 4:
      return riesz_sum(bracket(st.a0, st.d1f), bracket(st.a0, st.d2f), 1.0);
  }
  throw Error(ErrorKind::invalid_argument, "nonlinearity_B: kind " + std::to_string(kind) + " not in 1..4");
}

BPair assemble_Bpm(const LieField& b1, const LieField& b2, const LieField& b3, const LieField& b4) {
  LieField common = b3 - b1;
  LieField odd = b2 + b4;
  odd *= kRieszPhase;
  return {common + odd, common - odd};
}

// ---------------------------------------------------------------- elliptic

double elliptic_smallness(const LieField& d1f, const LieField& d2f) {
  std::vector<double> acc(d1f.grid().size(), 0.0);
  for (const LieField* w : {&d1f, &d2f})
    for (int e = 0; e < w->planes(); ++e) {
      auto p = w->plane(e);
      for (std::size_t k = 0; k < p.size(); ++k) acc[k] += std::norm(p[k]);
    }
  const double sup = std::sqrt(*std::max_element(acc.begin(), acc.end()));
  return 2.0 * d1f.grid().length() / (2.0 * std::numbers::pi) * sup;
}

namespace {

struct EllipticOperator {
  const LieField& d1f;
  const LieField& d2f;
  LieField src1, src2;  // [d_1 f, phi], [d_2 f, phi]
  std::shared_ptr<const GridTables> tab;

  EllipticOperator(const LieField& a, const LieField& b, const LieField& phi)
      : d1f(a), d2f(b), src1(bracket(a, phi)), src2(bracket(b, phi)), tab(tables_for(a.grid())) {}

  // Fourier coefficients of the right-hand side at A_0 = a0.
  Spectrum rhs(const LieField& a0) const {
    LieField v1 = src1 - bracket(a0, d2f);
    LieField v2 = src2 + bracket(a0, d1f);
    Spectrum s1 = fft(v1);
    s1.multiply(std::span<const cplx>(tab->i_xi1));
    Spectrum s2 = fft(v2);
    s2.multiply(std::span<const cplx>(tab->i_xi2));
    s1 += s2;
    return s1;
  }

  LieField solve(const Spectrum& rhs) const {
    Spectrum s = rhs;
    s.multiply(std::span<const double>(tab->inv_laplacian));
    return ifft(s, "A0");
  }

  Spectrum laplacian(const LieField& a0) const {
    Spectrum s = fft(a0);
    s.multiply(std::span<const double>(tab->laplacian));
    return s;
  }
};

double spectral_relative(const Spectrum& lhs, const Spectrum& rhs) {
  const double scale = l2_norm(rhs);
  return scale > 0 ? l2_norm(lhs - rhs) / scale : l2_norm(lhs);
}

}  // namespace

double elliptic_residual(const LieField& a0, const LieField& d1f, const LieField& d2f, const LieField& phi) {
  const EllipticOperator op(d1f, d2f, phi);
  return spectral_relative(op.laplacian(a0), op.rhs(a0));
}

EllipticResult elliptic_solve_A0(const LieField& d1f, const LieField& d2f, const LieField& phi,
                                 const LieField* guess, const EllipticOptions& opt) {
  d1f.require_compatible(d2f, "elliptic_solve_A0");
  d1f.require_compatible(phi, "elliptic_solve_A0");
  EllipticResult res{LieField(d1f.grid(), d1f.rank(), "A0")};
  res.smallness = elliptic_smallness(d1f, d2f);
  if (res.smallness > opt.smallness) {
    throw Error(ErrorKind::smallness_violated, "elliptic_solve_A0: smallness measure " +
                                                   std::to_string(res.smallness) + " exceeds threshold " +
                                                   std::to_string(opt.smallness));
  }
  const EllipticOperator op(d1f, d2f, phi);
  if (guess) {
    guess->require_compatible(d1f, "elliptic_solve_A0");
    res.a0 = *guess;
  }
  Spectrum lap = op.laplacian(res.a0);
  double prev_update = -1.0;
  for (;;) {
    const Spectrum rhs = op.rhs(res.a0);
    res.residual = spectral_relative(lap, rhs);
    if (l2_norm(rhs) == 0.0) {
      // Nothing drives A_0: the solution is zero.
      res.a0 = LieField(d1f.grid(), d1f.rank(), "A0");
      res.residual = 0.0;
      return res;
    }
    if (res.residual <= opt.tolerance) return res;
    if (res.iterations >= opt.max_iterations) {
      throw Error(ErrorKind::not_converged, "elliptic_solve_A0: residual " + std::to_string(res.residual) +
                                                " after " + std::to_string(res.iterations) + " iterations");
    }
    LieField next = op.solve(rhs);
    const double update = l2_norm(next - res.a0);
    if (prev_update > 1e-10 * l2_norm(next)) {
      const double ratio = update / prev_update;
      res.contraction = std::max(res.contraction, ratio);
      if (ratio >= 1.0) {
        throw Error(ErrorKind::smallness_violated,
                    "elliptic_solve_A0: iteration is not contracting (ratio " + std::to_string(ratio) + ")");
      }
    }
    prev_update = update;
    // Laplacian of the new iterate is the right-hand side just used, zero mode removed.
    lap = rhs;
    lap.plane(0)[0] = 0.0;
    for (int e = 1; e < lap.planes(); ++e) lap.plane(e)[0] = 0.0;
    res.a0 = std::move(next);
    ++res.iterations;
  }
}

// ---------------------------------------------------------------- time stepping

SourceEval evaluate_sources(const AuxState& s, const LieField* a0_guess, const EvolveOptions& opt) {
  PhysState phys = reconstruct(s);
  EllipticResult ell = elliptic_solve_A0(phys.d1f, phys.d2f, phys.phi, a0_guess, opt.elliptic);
  phys.a0 = ell.a0;
  const LieField b1 = nonlinearity_B(1, phys);
  const LieField b2 = nonlinearity_B(2, phys, &s, opt.b2_path);
  const LieField b3 = nonlinearity_B(3, phys);
  const LieField b4 = nonlinearity_B(4, phys);
  BPair b = assemble_Bpm(b1, b2, b3, b4);
  dealias(b.plus);
  dealias(b.minus);
  return {std::move(b), std::move(phys), std::move(ell)};
}

int step_count(double T, double dt) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw Error(ErrorKind::invalid_argument, "evolve: need dt > 0 and T >= 0");
  const double n = std::round(T / dt);
  if (std::abs(n * dt - T) > 1e-9 * std::max(T, dt)) {
    throw Error(ErrorKind::invalid_argument, "evolve: T must be a whole number of steps dt");
  }
  return static_cast<int>(n);
}

namespace {

void check_cfl(const TorusGrid& grid, double dt, double cfl) {
  const double xi_max = std::sqrt(2.0) * std::numbers::pi * grid.points() / grid.length();
  if (dt * xi_max > cfl) {
    throw Error(ErrorKind::invalid_argument, "evolve: dt * max|xi| = " + std::to_string(dt * xi_max) +
                                                 " exceeds the configured bound " + std::to_string(cfl));
  }
}

AuxState advance(const AuxState& s, const BPair& b, double dt) {
  WaveState u = duhamel_step({s.u, s.ut}, b.plus, dt);
  WaveState v = duhamel_step({s.v, s.vt}, b.minus, dt);
  return {std::move(u.u), std::move(u.ut), std::move(v.u), std::move(v.ut), s.t + dt};
}

SnapshotDiagnostics diagnose(const AuxState& s, const PhysState& phys, const EllipticResult& ell) {
  const Connection a = phys.connection();
  const double scale = l2_norm(a.a1) + l2_norm(a.a2);
  const double div = l2_norm(divergence(a.a1, a.a2));
  return {s.t,
          scale > 0 ? div / scale : div,
          wave_energy({s.u, s.ut}) + wave_energy({s.v, s.vt}),
          ell.iterations,
          ell.contraction,
          phys.discarded};
}

}  // namespace

Trajectory evolve(const AuxState& s0, double T, double dt, const EvolveOptions& opt, const StepObserver& observer) {
  const int steps = step_count(T, dt);
  check_cfl(s0.u.grid(), dt, opt.cfl);
  const int stride = std::max(1, opt.snapshot_stride);

  Trajectory traj;
  traj.steps = steps;
  AuxState s = s0;
  std::optional<LieField> guess;
  for (int n = 0;; ++n) {
    check_finite(s, opt.blow_up);
    SourceEval ev = evaluate_sources(s, guess ? &*guess : nullptr, opt);
    if (n % stride == 0 || n == steps) {
      traj.snapshots.push_back(s);
      traj.diagnostics.push_back(diagnose(s, ev.phys, ev.elliptic));
    }
    if (observer) observer({n, s, ev.phys, ev.elliptic});
    if (n == steps) break;

    const AuxState half = advance(s, ev.b, 0.5 * dt);
    SourceEval mid = evaluate_sources(half, &ev.phys.a0, opt);
    AuxState next = advance(s, mid.b, dt);
    next.t = s0.t + (n + 1) * dt;
    s = std::move(next);
    guess = std::move(mid.phys.a0);
  }
  return traj;
}

PicardResult picard_solve(const AuxState& s0, double T, double dt, int iterations, const EvolveOptions& opt) {
  if (iterations < 0) throw Error(ErrorKind::invalid_argument, "picard_solve: negative iteration count");
  const int steps = step_count(T, dt);
  check_cfl(s0.u.grid(), dt, opt.cfl);
  EvolveOptions src_opt = opt;
  src_opt.b2_path = B2Path::waves;

  const TorusGrid grid = s0.u.grid();
  const int rank = s0.u.rank();
  const BPair zero{LieField(grid, rank), LieField(grid, rank)};
  // Sources of the previous iterate at step starts and at half steps.
  std::vector<BPair> at_step(static_cast<std::size_t>(steps), zero);
  std::vector<BPair> at_half(static_cast<std::size_t>(steps), zero);
  const Multiplier h1 = Multiplier::bessel(1.0);

  PicardResult res;
  std::vector<AuxState> previous;
  for (int j = 0; j <= iterations; ++j) {
    std::vector<AuxState> states{s0};
    std::vector<AuxState> halves;
    states.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k < steps; ++k) {
      const AuxState& s = states.back();
      AuxState half = advance(s, at_step[static_cast<std::size_t>(k)], 0.5 * dt);
      AuxState next = advance(s, at_half[static_cast<std::size_t>(k)], dt);
      next.t = s0.t + (k + 1) * dt;
      check_finite(next, opt.blow_up);
      halves.push_back(std::move(half));
      states.push_back(std::move(next));
    }

    if (j > 0) {
      double sup = 0.0;
      for (std::size_t k = 0; k < states.size(); ++k) {
        const AuxState& a = states[k];
        const AuxState& b = previous[k];
        const double du = l2_norm(apply_multiplier(a.u - b.u, h1)) + l2_norm(a.ut - b.ut);
        const double dv = l2_norm(apply_multiplier(a.v - b.v, h1)) + l2_norm(a.vt - b.vt);
        sup = std::max(sup, du + dv);
      }
      res.differences.push_back(sup);
    }

    if (j < iterations) {
      std::optional<LieField> guess;
      for (int k = 0; k < steps; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        SourceEval e0 = evaluate_sources(states[idx], guess ? &*guess : nullptr, src_opt);
        SourceEval eh = evaluate_sources(halves[idx], &e0.phys.a0, src_opt);
        at_step[idx] = std::move(e0.b);
        at_half[idx] = std::move(eh.b);
        guess = std::move(eh.phys.a0);
      }
    }
    previous = std::move(states);
  }
  res.final_iterate = std::move(previous);
  return res;
}

// ---------------------------------------------------------------- consistency

ConsistencyReport consistency_report(const PhysState& s, const PhysRates& rates) {
  const Connection a = s.connection();
  TimeRates tr;
  tr.a1 = -partial_derivative(rates.f_t, 2);
  tr.a2 = partial_derivative(rates.f_t, 1);
  tr.phi = rates.phi_t;

  ConsistencyReport r;
  r["monopole_t"] = relative(covariant_derivative(a, s.phi, 0, &tr), curvature(a, 1, 2, &tr));
  r["monopole_x"] = relative_mean_free(covariant_derivative(a, s.phi, 1, &tr), curvature(a, 0, 2, &tr));
  r["monopole_y"] = relative_mean_free(covariant_derivative(a, s.phi, 2, &tr), curvature(a, 1, 0, &tr));

  const LieField d1f_t = partial_derivative(rates.f_t, 1);
  const LieField d2f_t = partial_derivative(rates.f_t, 2);
  r["higgs_evolution"] = relative(laplacian(s.f) + bracket(s.d1f, s.d2f), rates.phi_t + bracket(s.a0, s.phi));
  r["coordinate_x"] = relative_mean_free(partial_derivative(s.a0, 1) - partial_derivative(s.phi, 2) + d2f_t,
                               bracket(s.d1f, s.phi) - bracket(s.a0, s.d2f));
  r["coordinate_y"] = relative_mean_free(partial_derivative(s.a0, 2) + partial_derivative(s.phi, 1) - d1f_t,
                               bracket(s.d2f, s.phi) + bracket(s.a0, s.d1f));

  // Both sides compared without their means: the right side has none.
  const LieField lhs = mean_free(s.phi - rates.f_t);
  const LieField inner = partial_derivative(bracket(s.a0, s.d1f) + bracket(s.d2f, s.phi), 1) +
                         partial_derivative(bracket(s.a0, s.d2f) - bracket(s.d1f, s.phi), 2);
  r["potential_identity"] = relative(lhs, inverse_laplacian(inner));

  r["elliptic"] = elliptic_residual(s.a0, s.d1f, s.d2f, s.phi);
  const double scale = l2_norm(a.a1) + l2_norm(a.a2);
  const double div = l2_norm(divergence(a.a1, a.a2));
  r["coulomb"] = scale > 0 ? div / scale : div;
  return r;
}

PhysRates central_rates(const PhysState& before, const PhysState& after, double dt) {
  const double w = 1.0 / (2.0 * dt);
  LieField phi_t = after.phi - before.phi;
  phi_t *= w;
  LieField f_t = after.f - before.f;
  f_t *= w;
  return {std::move(phi_t), std::move(f_t)};
}

std::optional<ConsistencyReport> ResidualMonitor::push(PhysState s) {
  std::optional<ConsistencyReport> out;
  if (older_ && middle_ && (count_ - 1) % stride_ == 0) {
    out = consistency_report(*middle_, central_rates(*older_, s, dt_));
    for (const auto& [name, value] : *out) worst_[name] = std::max(worst_[name], value);
    ++reports_;
  }
  older_ = std::move(middle_);
  middle_ = std::move(s);
  ++count_;
  return out;
}

ConsistencyReport trajectory_residuals(const std::vector<PhysState>& states, double dt) {
  ResidualMonitor mon(dt);
  for (const auto& s : states) mon.push(s);
  return mon.worst();
}

}  // namespace monopole
