#pragma once
// Forms, curvature, covariant derivatives, the monopole residual, gauge
// transformations and the Coulomb projection.
//
// Index 0 is time, 1 and 2 are x and y. Only spatial derivatives are taken on
// the grid; anything involving d/dt reads from TimeRates.

#include <optional>
#include <vector>

#include "monopole/spectral.hpp"

namespace monopole {

enum class Metric { euclidean, minkowski };

// Components in the basis order
//   euclidean:  0: {1}   1: {dx, dy}        2: {dx^dy}
//   minkowski:  0: {1}   1: {dt, dx, dy}    2: {dt^dx, dt^dy, dx^dy}   3: {dt^dx^dy}
struct FormField {
  int degree = 0;
  Metric metric = Metric::euclidean;
  std::vector<LieField> components;
};

int form_component_count(int degree, Metric metric);

// Throws Error{unsupported_degree} outside the tables above, Error{invalid_argument}
// on a component count mismatch.
FormField hodge_star(const FormField& w);

struct Connection {
  LieField a0, a1, a2;

  const LieField& operator[](int alpha) const;
  static Connection zero(TorusGrid grid, int rank);
};

// Time derivatives of the spatial connection and of the Higgs field, taken
// from the evolution state. Anything not supplied is treated as unavailable.
struct TimeRates {
  std::optional<LieField> a1, a2, phi;
};

// F_{alpha beta} = d_alpha A_beta - d_beta A_alpha + [A_alpha, A_beta].
// Throws Error{missing_time_derivative} for F_{0i} without rates for A_i.
LieField curvature(const Connection& a, int alpha, int beta, const TimeRates* rates = nullptr);

// D_alpha phi = d_alpha phi + [A_alpha, phi].
LieField covariant_derivative(const Connection& a, const LieField& phi, int alpha,
                              const TimeRates* rates = nullptr);

struct MonopoleResidual {
  LieField r0;  // D_0 phi - F_12
  LieField r1;  // D_1 phi - F_02
  LieField r2;  // D_2 phi - F_10
};

MonopoleResidual monopole_residual(const Connection& a, const LieField& phi, const TimeRates& rates);

struct GaugeTransformed {
  Connection a;
  LieField phi;
  std::optional<TimeRates> rates;  // present when rates were supplied
};

// A_g = g A g^-1 + g d(g^-1), phi_g = g phi g^-1. g_t is the time derivative
// of g; nullptr means g is time independent. Throws Error{non_unitary} if g
// departs from SU(n) by more than 1e-8 at any point.
GaugeTransformed gauge_transform(const Connection& a, const LieField& phi, const LieField& g,
                                 const LieField* g_t = nullptr, const TimeRates* rates = nullptr);

// d_1 a_1 + d_2 a_2
LieField divergence(const LieField& a1, const LieField& a2);

struct CoulombOptions {
  double smallness = 0.1;     // bound on ||a_1||_{H^s} + ||a_2||_{H^s}
  double sobolev_s = 1.0;
  double tol_c = 1e-9;        // relative to ||a_1|| + ||a_2||
  int max_iterations = 100;
};

struct CoulombResult {
  LieField g;
  LieField a1, a2;
  int iterations = 0;
  // Relative divergence before each update and after the last one.
  std::vector<double> divergence_history;
};

// Fixed point g <- exp(chi) g with Laplacian(chi) = div(a_g). Throws
// Error{smallness_violated} when the data exceed the threshold, the
// divergence stops decreasing, or the iteration budget runs out.
CoulombResult coulomb_project(const LieField& a1, const LieField& a2, const CoulombOptions& opt = {});

}  // namespace monopole
