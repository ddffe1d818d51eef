#include <doctest.h>

#include "helpers.hpp"
#include "monopole/ame.hpp"
#include "monopole/data.hpp"
#include "monopole/error.hpp"

using namespace monopole;
using test::pauli_i;

namespace {

const double kPi = std::numbers::pi;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io;
}

double rel(const LieField& a, const LieField& b) {
  const double s = l2_norm(a) + l2_norm(b);
  return s > 0 ? l2_norm(a - b) / s : 0.0;
}

double aux_distance(const AuxState& a, const AuxState& b) {
  return l2_norm(a.u - b.u) + l2_norm(a.ut - b.ut) + l2_norm(a.v - b.v) + l2_norm(a.vt - b.vt);
}

double aux_size(const AuxState& a) { return l2_norm(a.u) + l2_norm(a.ut) + l2_norm(a.v) + l2_norm(a.vt); }

// Time derivatives of the wave variables plus the explicit data built with a
// chosen coupling phase.
AuxState aux_with_phase(const LieField& phi0, const LieField& h, cplx phase) {
  AuxState s = AuxState::zero(phi0.grid(), phi0.rank());
  s.ut = phi0 + phase * h;
  s.vt = phi0 - phase * h;
  return s;
}

}  // namespace

TEST_CASE("initial data round trip through the wave variables") {
  const TorusGrid grid(64, 2.0 * kPi);
  const CoulombData d = gaussian_data(grid, 2, 0.1, 0.5, 3);
  const InitialData init = build_initial_data(d.a1, d.a2, d.phi0);
  const PhysState p = reconstruct(init.aux);
  CHECK(rel(p.phi, d.phi0) < 1e-13);
  CHECK(rel(p.d1f, d.a2) < 1e-13);
  CHECK(rel(p.d2f, -d.a1) < 1e-13);
  LieField f = d.f;
  f -= LieField::constant(grid, f.mean());
  CHECK(rel(p.f, f) < 1e-13);
  CHECK(rel(init.f0, f) < 1e-13);
  CHECK(p.discarded < 1e-14);
  CHECK(test::max_abs(p.a0) == 0.0);
  // A = *df recovers the data
  const Connection a = p.connection();
  CHECK(rel(a.a1, d.a1) < 1e-13);
  CHECK(rel(a.a2, d.a2) < 1e-13);
}

TEST_CASE("initial data validation") {
  const TorusGrid grid(32, 2.0 * kPi);
  std::mt19937_64 rng(2);
  const LieField g = test::smooth_su2(grid, rng, 0.1);
  const LieField phi0 = test::smooth_su2(grid, rng, 0.1);
  const LieField c = LieField::constant(grid, pauli_i(1));
  CHECK(kind_of([&] { build_initial_data(-partial_derivative(g, 2) + c, partial_derivative(g, 1), phi0); }) ==
        ErrorKind::nonzero_mean);
  // a gradient is as far from Coulomb gauge as possible
  CHECK(kind_of([&] { build_initial_data(partial_derivative(g, 1), partial_derivative(g, 2), phi0); }) ==
        ErrorKind::coulomb_violated);
}

TEST_CASE("h of a single mode") {
  const double k = 3.0;
  const TorusGrid grid(32, 2.0 * kPi);
  const LieField a2 = LieField::scalar_times(grid, [&](double x, double) { return std::cos(k * x); }, pauli_i(3));
  const InitialData init = build_initial_data(LieField(grid, 2), a2, LieField(grid, 2));
  const LieField expect = LieField::scalar_times(grid, [&](double x, double) { return -std::sin(k * x); }, pauli_i(3));
  CHECK(test::max_abs_diff(init.h, expect) < 1e-14);
  // f0 solves Laplacian f = d_1 a_2 - d_2 a_1 = -k sin(kx) T
  const LieField f0 = LieField::scalar_times(grid, [&](double x, double) { return std::sin(k * x) / k; }, pauli_i(3));
  CHECK(test::max_abs_diff(init.f0, f0) < 1e-14);
}

TEST_CASE("coupling phase is locked by the round trip") {
  const TorusGrid grid(32, 2.0 * kPi);
  const CoulombData d = gaussian_data(grid, 2, 0.1, 0.5, 4);
  const LieField h = build_initial_data(d.a1, d.a2, d.phi0).h;

  const PhysState ok = reconstruct(aux_with_phase(d.phi0, h, cplx(0.0, -1.0)));
  CHECK(rel(ok.d1f, d.a2) < 1e-13);
  CHECK(rel(ok.phi, d.phi0) < 1e-13);

  CHECK(kind_of([&] { reconstruct(aux_with_phase(d.phi0, h, cplx(1.0, 0.0))); }) ==
        ErrorKind::unphysical_component);

  const PhysState flipped = reconstruct(aux_with_phase(d.phi0, h, cplx(0.0, 1.0)));
  CHECK(l2_norm(flipped.d1f - d.a2) / l2_norm(d.a2) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("reconstruct rejects non-su(n) data") {
  const TorusGrid grid(16, 1.0);
  AuxState s = AuxState::zero(grid, 2);
  s.ut = LieField::scalar_times(grid, [](double x, double) { return std::cos(2.0 * kPi * x); },
                                cplx(0.0, 1.0) * Matrix::identity(2));
  CHECK(kind_of([&] { reconstruct(s); }) == ErrorKind::unphysical_component);
}

TEST_CASE("elliptic solve against the equation written out") {
  const TorusGrid grid(64, 2.0 * kPi);
  const CoulombData d = gaussian_data(grid, 2, 0.1, 0.5, 5);
  const LieField d1f = d.a2, d2f = -d.a1;
  const EllipticResult r = elliptic_solve_A0(d1f, d2f, d.phi0);
  CHECK(r.iterations > 1);
  CHECK(r.contraction < 0.5);
  CHECK(r.residual <= 1e-11);
  CHECK(r.smallness == doctest::Approx(elliptic_smallness(d1f, d2f)));
  const LieField a0 = r.a0;
  LieField rhs = -partial_derivative(bracket(a0, d2f), 1) + partial_derivative(bracket(a0, d1f), 2);
  rhs += partial_derivative(bracket(d1f, d.phi0), 1);
  rhs += partial_derivative(bracket(d2f, d.phi0), 2);
  CHECK(l2_norm(laplacian(a0) - rhs) / l2_norm(rhs) < 1e-10);
  CHECK(elliptic_residual(a0, d1f, d2f, d.phi0) <= 1e-11);

  // A warm start from the solution needs no further work.
  const EllipticResult again = elliptic_solve_A0(d1f, d2f, d.phi0, &a0);
  CHECK(again.iterations <= 1);

  EllipticOptions tight;
  tight.max_iterations = 1;
  CHECK(kind_of([&] { elliptic_solve_A0(d1f, d2f, d.phi0, nullptr, tight); }) == ErrorKind::not_converged);
}

TEST_CASE("elliptic solve refuses large data") {
  const TorusGrid grid(32, 2.0 * kPi);
  const CoulombData d = gaussian_data(grid, 2, 1.0, 0.5, 5);
  const double m = elliptic_smallness(d.a2, -d.a1);
  REQUIRE(m > 0.0);
  const double scale = 1.5 / m;
  CHECK(kind_of([&] { elliptic_solve_A0(scale * d.a2, scale * (-d.a1), d.phi0); }) ==
        ErrorKind::smallness_violated);
  // smallness measure: 2 (L / 2pi) sup |grad f|
  const LieField c1 = LieField::constant(grid, pauli_i(1)), c2 = LieField::constant(grid, pauli_i(2));
  CHECK(elliptic_smallness(c1, c2) == doctest::Approx(2.0));
}

TEST_CASE("zero drive gives zero potential") {
  const TorusGrid grid(16, 1.0);
  const EllipticResult r = elliptic_solve_A0(LieField(grid, 2), LieField(grid, 2), LieField(grid, 2));
  CHECK(test::max_abs(r.a0) == 0.0);
  CHECK(r.residual == 0.0);
}

TEST_CASE("source assembly") {
  const TorusGrid grid(8, 1.0);
  const LieField b1 = LieField::constant(grid, pauli_i(1)), b2 = LieField::constant(grid, pauli_i(2)),
                 b3 = LieField::constant(grid, pauli_i(3)), b4 = LieField::constant(grid, 3.0 * pauli_i(1));
  const BPair b = assemble_Bpm(b1, b2, b3, b4);
  const cplx kappa(0.0, -1.0);
  const Matrix plus = -pauli_i(1) + kappa * pauli_i(2) + pauli_i(3) + kappa * 3.0 * pauli_i(1);
  const Matrix minus = -pauli_i(1) - kappa * pauli_i(2) + pauli_i(3) - kappa * 3.0 * pauli_i(1);
  CHECK(test::max_abs_diff(b.plus.at(2, 3), plus) < 1e-15);
  CHECK(test::max_abs_diff(b.minus.at(2, 3), minus) < 1e-15);
  CHECK(kind_of([&] { nonlinearity_B(5, PhysState{b1, b1, b1, b1, b1}); }) == ErrorKind::invalid_argument);
}

TEST_CASE("nonlinearities written out") {
  const TorusGrid grid(64, 2.0 * kPi);
  const CoulombData d = gaussian_data(grid, 2, 0.1, 0.5, 6);
  const InitialData init = build_initial_data(d.a1, d.a2, d.phi0);
  PhysState p = reconstruct(init.aux);
  p.a0 = elliptic_solve_A0(p.d1f, p.d2f, p.phi).a0;
  CHECK(rel(nonlinearity_B(1, p), bracket(d.a2, -d.a1)) < 1e-13);
  CHECK(rel(nonlinearity_B(3, p), bracket(p.a0, d.phi0)) < 1e-13);
  const LieField b2 = riesz(bracket(p.d2f, p.phi), 1) - riesz(bracket(p.d1f, p.phi), 2);
  CHECK(rel(nonlinearity_B(2, p), b2) < 1e-13);
  const LieField b4 = riesz(bracket(p.a0, p.d1f), 1) + riesz(bracket(p.a0, p.d2f), 2);
  CHECK(rel(nonlinearity_B(4, p), b4) < 1e-13);
}

TEST_CASE("both evaluations of the second nonlinearity agree") {
  const TorusGrid grid(64, 2.0 * kPi);
  const CoulombData d = gaussian_data(grid, 2, 0.1, 0.5, 7);
  const InitialData init = build_initial_data(d.a1, d.a2, d.phi0);
  // Move off t = 0 so that u and v are nonzero.
  EvolveOptions opt;
  const Trajectory tr = evolve(init.aux, 0.1, 0.01, opt);
  const AuxState& s = tr.snapshots.back();
  const PhysState p = reconstruct(s);
  CHECK(l2_norm(s.u) > 0.0);
  CHECK(kind_of([&] { nonlinearity_B(2, p, nullptr, B2Path::waves); }) == ErrorKind::invalid_argument);
  CHECK(rel(nonlinearity_B(2, p, &s, B2Path::fields), nonlinearity_B(2, p, &s, B2Path::waves)) < 1e-12);
}

TEST_CASE("step count and CFL guard") {
  CHECK(step_count(0.5, 0.01) == 50);
  CHECK(step_count(0.0, 0.01) == 0);
  CHECK(kind_of([] { step_count(0.1, 0.03); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { step_count(0.1, 0.0); }) == ErrorKind::invalid_argument);
  const TorusGrid grid(64, 2.0 * kPi);
  CHECK(kind_of([&] { evolve(AuxState::zero(grid, 2), 0.5, 0.1); }) == ErrorKind::invalid_argument);
}

TEST_CASE("zero data stay zero") {
  const TorusGrid grid(16, 2.0 * kPi);
  int seen = 0;
  const Trajectory tr = evolve(AuxState::zero(grid, 2), 0.1, 0.02, {}, [&](const StepRecord& r) {
    CHECK(r.step == seen);
    ++seen;
  });
  CHECK(seen == 6);
  CHECK(tr.steps == 5);
  CHECK(tr.snapshots.back().t == doctest::Approx(0.1));
  CHECK(aux_size(tr.snapshots.back()) == 0.0);
  CHECK(tr.diagnostics.back().energy == 0.0);
}

TEST_CASE("free part is the exact wave propagator") {
  // With phi0 along one generator and no connection every nonlinearity vanishes.
  const TorusGrid grid(32, 2.0 * kPi);
  const LieField phi0 = LieField::scalar_times(grid, [](double x, double y) { return 0.1 * std::sin(x + 2 * y); },
                                               pauli_i(3));
  const InitialData init = build_initial_data(LieField(grid, 2), LieField(grid, 2), phi0);
  const Trajectory tr = evolve(init.aux, 0.3, 0.01);
  const WaveState w = wave_propagate(init.aux.u, init.aux.ut, 0.3);
  CHECK(test::max_abs_diff(tr.snapshots.back().u, w.u) < 1e-13);
  CHECK(test::max_abs_diff(tr.snapshots.back().ut, w.ut) < 1e-13);
}

TEST_CASE("energy drift is small for small data") {
  const TorusGrid grid(32, 2.0 * kPi);
  const CoulombData d = gaussian_data(grid, 2, 0.02, 0.5, 8);
  const InitialData init = build_initial_data(d.a1, d.a2, d.phi0);
  EvolveOptions opt;
  opt.snapshot_stride = 10;
  const Trajectory tr = evolve(init.aux, 0.5, 0.01, opt);
  const double e0 = tr.diagnostics.front().energy;
  for (const auto& diag : tr.diagnostics) {
    CHECK(std::abs(diag.energy - e0) < 0.05 * e0);
    CHECK(diag.constraint < 1e-12);
  }
}

TEST_CASE("Picard iterates converge to the evolution") {
  const TorusGrid grid(32, 2.0 * kPi);
  const CoulombData d = gaussian_data(grid, 2, 0.05, 0.5, 9);
  const InitialData init = build_initial_data(d.a1, d.a2, d.phi0);
  EvolveOptions opt;
  opt.b2_path = B2Path::waves;
  const PicardResult pr = picard_solve(init.aux, 0.2, 0.01, 10, opt);
  REQUIRE(pr.differences.size() == 10);
  for (std::size_t j = 2; j < pr.differences.size(); ++j) {
    if (pr.differences[j - 1] > 1e-13) CHECK(pr.differences[j] <= 0.7 * pr.differences[j - 1]);
  }
  opt.snapshot_stride = 1;
  const Trajectory tr = evolve(init.aux, 0.2, 0.01, opt);
  REQUIRE(tr.snapshots.size() == pr.final_iterate.size());
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    CHECK(aux_distance(tr.snapshots[k], pr.final_iterate[k]) <= 1e-11 * aux_size(tr.snapshots.back()));
  }
  CHECK(kind_of([&] { picard_solve(init.aux, 0.2, 0.01, -1); }) == ErrorKind::invalid_argument);
}

TEST_CASE("residual monitor on a smooth run") {
  const TorusGrid grid(32, 2.0 * kPi);
  const CoulombData d = gaussian_data(grid, 2, 0.05, 0.5, 10);
  const InitialData init = build_initial_data(d.a1, d.a2, d.phi0);
  ResidualMonitor coarse(0.01), fine(0.005);
  std::vector<PhysState> states;
  evolve(init.aux, 0.1, 0.01, {}, [&](const StepRecord& r) {
    PhysState p = r.phys;
    p.a0 = r.elliptic.a0;
    coarse.push(p);
  });
  evolve(init.aux, 0.1, 0.005, {}, [&](const StepRecord& r) {
    PhysState p = r.phys;
    p.a0 = r.elliptic.a0;
    fine.push(p);
  });
  CHECK(coarse.reports() == 9);
  for (const char* key : {"monopole_t", "monopole_x", "monopole_y", "higgs_evolution", "coordinate_x",
                          "coordinate_y", "potential_identity"}) {
    const double c = coarse.worst().at(key), f = fine.worst().at(key);
    CAPTURE(std::string(key));
    // central differences: second order in dt
    CHECK(c < 0.1);
    CHECK(f < 0.4 * c);
  }
  CHECK(coarse.worst().at("elliptic") < 1e-10);
  CHECK(coarse.worst().at("coulomb") < 1e-12);
}
