#pragma once
// Bilinear null forms and the symbol of the half-wave form Q.

#include <array>

#include "monopole/spectral.hpp"

namespace monopole {

// (d_t + sign*i*D) w from samples of w and d_t w; sign is +1 or -1.
LieField half_wave(const LieField& w, const LieField& w_t, int sign);

// d_1 f d_2 g - d_2 f d_1 g, matrix products in that order.
LieField null_form_Q12(const LieField& f, const LieField& g);

enum class QVariant {
  // (d_t +- iD)R_j a (d_t +- iD)b - (d_t +- iD)a (d_t +- iD)R_j b
  same_sign_minus,
  // (d_t +- iD)R_j a (d_t -+ iD)b + (d_t +- iD)a (d_t -+ iD)R_j b
  opposite_sign_plus,
};

// product: X*Y for each pair as written. commutator: [X, Y] instead, i.e.
// the form minus its factor-reversed copy, which is what appears when the
// factors do not commute.
enum class QCombine { product, commutator };

// sign selects the upper (+1) or lower (-1) choice of the +- signs.
LieField null_form_Q(const LieField& a, const LieField& a_t, const LieField& b, const LieField& b_t,
                     int j, QVariant variant, int sign = +1, QCombine combine = QCombine::product);

using Vec2 = std::array<double, 2>;

// (xi_j/|xi| + eta_j/|eta|)(tau + |xi|)(lambda - |eta|). Throws
// Error{invalid_argument} for a zero spatial frequency or j outside {1, 2}.
double symbol_q(double tau, Vec2 xi, double lambda, Vec2 eta, int j);

// |tau| >= 2|xi| or |lambda| >= 2|eta|
bool q_far_from_cone(double tau, Vec2 xi, double lambda, Vec2 eta);

// Bound 2(|tau| + |xi|)(|lambda| + |eta|) used on the far-from-cone region.
double q_far_bound(double tau, Vec2 xi, double lambda, Vec2 eta);

}  // namespace monopole
