#include <doctest.h>

#include "helpers.hpp"
#include "monopole/analysis.hpp"
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

LieField mode(const TorusGrid& g, int kx, int ky) {
  return LieField::scalar_times(g, [=](double x, double y) { return std::sin(kx * x + ky * y); }, pauli_i(1));
}

}  // namespace

TEST_CASE("Sobolev norms of single modes") {
  const TorusGrid g(32, 2.0 * kPi);
  const LieField u = mode(g, 3, 4);
  CHECK(sobolev_norm(u, 0.0) == doctest::Approx(l2_norm(u)).epsilon(1e-14));
  for (double s : {-1.0, -0.3, 0.5, 1.0, 2.0}) {
    CHECK(sobolev_norm(u, s) == doctest::Approx(std::pow(26.0, s / 2.0) * l2_norm(u)).epsilon(1e-13));
    CHECK(sobolev_norm(u, s, true) == doctest::Approx(std::pow(5.0, s) * l2_norm(u)).epsilon(1e-13));
  }
  std::mt19937_64 rng(1);
  const LieField w = test::smooth_su2(g, rng, 1.0);
  double prev = 0.0;
  for (double s = -1.0; s <= 2.0; s += 0.25) {
    const double n = sobolev_norm(w, s);
    CHECK(n > prev);
    prev = n;
  }
  const LieField c = LieField::constant(g, pauli_i(2));
  CHECK(kind_of([&] { sobolev_norm(c, -0.5, true); }) == ErrorKind::nonzero_mean);
  CHECK(sobolev_norm(c, -0.5) == doctest::Approx(l2_norm(c)));
}

TEST_CASE("space-time samples") {
  const TorusGrid g(16, 2.0 * kPi);
  const LieField u = mode(g, 1, 2);
  const auto ws = SpaceTimeSample::from_function(g, 2, 1.0, 9, [&](double t) { return (1.0 + t) * u; });
  CHECK(ws.dt() == doctest::Approx(0.125));
  CHECK(ws.window_weight(0) == 0.0);
  CHECK(ws.window_weight(4) == doctest::Approx(1.0));
  CHECK(ws.window_weight(2) == doctest::Approx(0.5));
  CHECK(test::max_abs_diff(ws.frame(2), (0.5 * 1.25) * u) < 1e-15);
  CHECK(kind_of([&] { SpaceTimeSample(g, 2, 1.0, 4); }) == ErrorKind::invalid_argument);
  const SpaceTimeSample doubled = ws.map([](const LieField& x) { return 2.0 * x; });
  CHECK(test::max_abs_diff(doubled.frame(3), 2.0 * ws.frame(3)) == 0.0);
}

TEST_CASE("wave-Sobolev norm at order zero is the space-time L2 norm") {
  std::mt19937_64 rng(2);
  const TorusGrid g(16, 3.0);
  const LieField a = test::smooth_su2(g, rng, 1.0), b = test::smooth_su2(g, rng, 1.0);
  for (Window win : {Window::hann, Window::none}) {
    const auto ws = SpaceTimeSample::from_function(
        g, 2, 0.7, 12, [&](double t) { return std::cos(3.0 * t) * a + std::sin(t) * b; }, win);
    double direct = 0.0;
    for (int m = 0; m < ws.frames(); ++m) direct += ws.dt() * std::pow(l2_norm(ws.frame(m)), 2);
    CHECK(std::abs(wave_sobolev_norm(ws, 0.0, 0.0) - std::sqrt(direct)) < 1e-10 * std::sqrt(direct));
  }
}

TEST_CASE("static fields reduce to the spatial norm") {
  std::mt19937_64 rng(3);
  const TorusGrid g(16, 2.0 * kPi);
  const LieField u = test::smooth_su2(g, rng, 1.0);
  const auto ws = SpaceTimeSample::from_function(g, 2, 1.0, 10, [&](double) { return u; }, Window::none);
  const double scale = std::sqrt(ws.frames() * ws.dt());
  for (double s : {0.0, 0.3, 1.0}) {
    CHECK(wave_sobolev_norm(ws, s, 0.0) == doctest::Approx(scale * sobolev_norm(u, s)).epsilon(1e-12));
    // tau = 0 only, so the cone weight is (1 + |xi|)^theta
    const Multiplier m{[s](double a, double b) {
                         const double r = std::hypot(a, b);
                         return cplx(std::pow(1.0 + r * r, s / 2.0) * std::pow(1.0 + r, 0.7));
                       },
                       ZeroModePolicy::identity, 0.0, "static"};
    CHECK(wave_sobolev_norm(ws, s, 0.7) == doctest::Approx(scale * l2_norm(apply_multiplier(u, m))).epsilon(1e-12));
  }
}

TEST_CASE("a free wave sits on the light cone") {
  // e^{i(3x - 3t)} sampled over exactly whole periods: the time transform has
  // a single frequency with |tau| = |xi|, so theta has no effect.
  const TorusGrid g(16, 2.0 * kPi);
  const int frames = 16;
  const double duration = 2.0 * kPi * (frames - 1) / frames;
  auto wave = [&](double t) {
    return LieField::sample(g, 2, [=](double x, double) { return std::polar(1.0, 3.0 * x - 3.0 * t) * pauli_i(3); });
  };
  const auto ws = SpaceTimeSample::from_function(g, 2, duration, frames, wave, Window::none);
  const double base = wave_sobolev_norm(ws, 0.5, 0.0);
  CHECK(base == doctest::Approx(std::sqrt(frames * ws.dt()) * std::pow(10.0, 0.25) * l2_norm(wave(0.0))));
  for (double theta : {0.3, 0.8, 2.0}) CHECK(wave_sobolev_norm(ws, 0.5, theta) == doctest::Approx(base).epsilon(1e-12));
  // calH adds ||d_t u||_{H^{s-1}} = 3 * 10^{-1/4} ||u|| per unit weight
  const double extra = 3.0 * std::pow(10.0, -0.25) / std::pow(10.0, 0.25) * base;
  CHECK(wave_sobolev_norm(ws, 0.5, 0.8, WaveNorm::calH) == doctest::Approx(base + extra).epsilon(1e-12));
  // Off the cone the weight grows with theta.
  auto off = [&](double t) {
    return LieField::sample(g, 2, [=](double x, double) { return std::polar(1.0, 3.0 * x - 1.0 * t) * pauli_i(3); });
  };
  const auto wo = SpaceTimeSample::from_function(g, 2, duration, frames, off, Window::none);
  CHECK(wave_sobolev_norm(wo, 0.5, 1.0) == doctest::Approx(3.0 * wave_sobolev_norm(wo, 0.5, 0.0)).epsilon(1e-12));
}

TEST_CASE("space-time multiplier") {
  std::mt19937_64 rng(4);
  const TorusGrid g(16, 2.0 * kPi);
  const LieField u = test::smooth_su2(g, rng, 1.0);
  const auto ws = SpaceTimeSample::from_function(g, 2, 1.0, 8, [&](double t) { return std::exp(t) * u; });
  const SpaceTimeSample same = space_time_multiplier(ws, 0.0, 0.0);
  for (int m = 0; m < ws.frames(); ++m) CHECK(test::max_abs_diff(same.frame(m), ws.frame(m)) < 1e-14);
  // static field: Lambda_+^1 acts as (1 + |xi|^2)^{1/2}
  const auto st = SpaceTimeSample::from_function(g, 2, 1.0, 8, [&](double) { return u; }, Window::none);
  const SpaceTimeSample up = space_time_multiplier(st, 1.0, 0.0);
  CHECK(test::max_abs_diff(up.frame(3), apply_multiplier(u, Multiplier::bessel(1.0))) < 1e-12);
}

TEST_CASE("mixed Lebesgue norms of a constant") {
  const TorusGrid g(8, 3.0);
  const Matrix c = 2.0 * pauli_i(1);
  const double mag = frobenius_norm(c);
  const auto ws = SpaceTimeSample::from_function(g, 2, 0.5, 8, [&](double) { return LieField::constant(g, c); },
                                                 Window::none);
  const double span = ws.frames() * ws.dt();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(mixed_norm(ws, 2, 2) == doctest::Approx(std::sqrt(span) * mag * 3.0));
  CHECK(mixed_norm(ws, 4, 8) == doctest::Approx(std::pow(span, 0.25) * mag * std::pow(9.0, 0.125)));
  CHECK(mixed_norm(ws, inf, 4) == doctest::Approx(mag * std::sqrt(3.0)));
  CHECK(mixed_norm(ws, 3, inf) == doctest::Approx(std::cbrt(span) * mag));
  CHECK(mixed_norm(ws, inf, inf) == doctest::Approx(mag));
  CHECK(kind_of([&] { mixed_norm(ws, 0.5, 2); }) == ErrorKind::invalid_argument);
}

TEST_CASE("estimate ratio guards") {
  const EnsembleSpec spec;
  const SpaceTimeSample u = random_free_wave(spec, 1);
  const SpaceTimeSample zero(spec.grid, 2, spec.duration, spec.frames);
  EstimateInputs in{&zero, &zero, nullptr, nullptr};
  CHECK(kind_of([&] { estimate_ratio(EstimateKind::E, in, default_params(EstimateKind::E)); }) ==
        ErrorKind::degenerate_input);
  in = {&u, &u, nullptr, nullptr};
  EstimateParams bad = default_params(EstimateKind::A);
  bad.theta = 0.4;
  CHECK(kind_of([&] { estimate_ratio(EstimateKind::A, in, bad); }) == ErrorKind::inadmissible_params);
  bad = default_params(EstimateKind::D);
  bad.p = 2.0;
  CHECK(kind_of([&] { estimate_ratio(EstimateKind::D, in, bad); }) == ErrorKind::inadmissible_params);
  EstimateInputs missing{&u, nullptr, nullptr, nullptr};
  CHECK(kind_of([&] { estimate_ratio(EstimateKind::E, missing, default_params(EstimateKind::E)); }) ==
        ErrorKind::invalid_argument);
}

TEST_CASE("the null form vanishes on a commuting field") {
  // f = g(t, x) T with a single generator: [d_1 f, d_2 f] = 0.
  const EnsembleSpec spec;
  const auto f = SpaceTimeSample::from_function(spec.grid, 2, spec.duration, spec.frames, [&](double t) {
    return LieField::scalar_times(
        spec.grid, [=](double x, double y) { return 0.1 * std::sin(x + 2 * y - std::sqrt(5.0) * t); }, pauli_i(2));
  });
  const EstimateValue v = estimate_ratio(EstimateKind::M1, {&f, nullptr, nullptr, nullptr},
                                         default_params(EstimateKind::M1));
  CHECK(v.rhs > 0.0);
  CHECK(v.ratio < 1e-14);
}

TEST_CASE("ensembles") {
  EnsembleSpec spec;
  spec.frames = 8;
  const SpaceTimeSample a = random_free_wave(spec, 7), b = random_free_wave(spec, 7), c = random_free_wave(spec, 8);
  CHECK(test::max_abs_diff(a.frame(3), b.frame(3)) == 0.0);
  CHECK(test::max_abs_diff(a.frame(3), c.frame(3)) > 0.0);

  SUBCASE("product estimate stays bounded") {
    const RatioStats e = sample_estimate(EstimateKind::E, spec, default_params(EstimateKind::E), 50, 3);
    REQUIRE(e.ratios.size() == 50);
    for (double r : e.ratios) CHECK(std::isfinite(r));
    CHECK(e.max < 10.0 * e.mean);
    CHECK(e.max < 100.0);
  }
  SUBCASE("every kind samples") {
    for (EstimateKind k : {EstimateKind::A, EstimateKind::C, EstimateKind::D, EstimateKind::E, EstimateKind::M1,
                           EstimateKind::M2, EstimateKind::M3, EstimateKind::M4, EstimateKind::ell,
                           EstimateKind::bound}) {
      CAPTURE(std::string(estimate_kind_name(k)));
      const RatioStats st = sample_estimate(k, spec, default_params(k), 3, 5);
      CHECK(st.ratios.size() == 3);
      CHECK(st.max > 0.0);
      CHECK(std::isfinite(st.max));
      CHECK(st.mean <= st.max);
    }
  }
}

TEST_CASE("summary statistics") {
  const RatioStats s = summarize({1.0, 3.0, 2.0});
  CHECK(s.max == 3.0);
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(summarize({}).max == 0.0);
}

TEST_CASE("rescaling") {
  const TorusGrid grid(32, 2.0 * kPi);
  const CoulombData d = gaussian_data(grid, 2, 0.05, 0.5, 2);
  const InitialData init = build_initial_data(d.a1, d.a2, d.phi0);
  std::vector<PhysState> states;
  evolve(init.aux, 0.05, 0.01, {}, [&](const StepRecord& r) { states.push_back(r.phys); });
  const PhysState& s = states[2];

  const PhysState same = rescale(s, 1.0);
  CHECK(same.phi.grid() == s.phi.grid());
  CHECK(test::max_abs_diff(same.phi, s.phi) == 0.0);
  const PhysState half = rescale(s, 2.0);
  CHECK(half.phi.grid().length() == doctest::Approx(kPi));
  CHECK(half.t == doctest::Approx(s.t / 2.0));
  CHECK(test::max_abs(half.phi) == doctest::Approx(2.0 * test::max_abs(s.phi)));
  CHECK(test::max_abs_diff(half.f.at(5, 6), s.f.at(5, 6)) == 0.0);
  CHECK(kind_of([&] { rescale(s, 0.0); }) == ErrorKind::invalid_argument);

  const ConsistencyReport base = trajectory_residuals(states, 0.01);
  const ConsistencyReport one = scaling_residual(states, 0.01, 1.0);
  for (const auto& [key, value] : base) CHECK(one.at(key) == value);
  // Every identity is homogeneous under the scaling, so the relative residuals
  // agree up to rounding.
  const ConsistencyReport two = scaling_residual(states, 0.01, 2.0);
  for (const auto& [key, value] : base) {
    CAPTURE(key);
    CHECK(std::abs(two.at(key) - value) <= 1e-6 * value + 1e-13);
  }
  CHECK(kind_of([&] { scaling_residual({s}, 0.01, 2.0); }) == ErrorKind::grid_mismatch);

  std::vector<PhysState> zeros;
  evolve(AuxState::zero(TorusGrid(16, 1.0), 2), 0.04, 0.01, {}, [&](const StepRecord& r) { zeros.push_back(r.phys); });
  for (const auto& [key, value] : scaling_residual(zeros, 0.01, 2.0)) CHECK(value == 0.0);
}
