#include "monopole/null_forms.hpp"

#include <cmath>

#include "monopole/error.hpp"

namespace monopole {

LieField half_wave(const LieField& w, const LieField& w_t, int sign) {
  w.require_compatible(w_t, "half_wave");
  const auto tab = tables_for(w.grid());
  Spectrum s = fft(w);
  s.multiply(std::span<const double>(tab->abs_xi));
  s *= cplx(0.0, sign > 0 ? 1.0 : -1.0);
  LieField out = ifft(s);
  out += w_t;
  return out;
}

LieField null_form_Q12(const LieField& f, const LieField& g) {
  LieField q = product(partial_derivative(f, 1), partial_derivative(g, 2));
  q -= product(partial_derivative(f, 2), partial_derivative(g, 1));
  return q;
}

LieField null_form_Q(const LieField& a, const LieField& a_t, const LieField& b, const LieField& b_t,
                     int j, QVariant variant, int sign, QCombine combine) {
  if (j != 1 && j != 2) throw Error(ErrorKind::invalid_argument, "null_form_Q: j must be 1 or 2");
  const int sa = sign > 0 ? 1 : -1;
  const int sb = variant == QVariant::same_sign_minus ? sa : -sa;
  const LieField ha = half_wave(a, a_t, sa);
  const LieField hb = half_wave(b, b_t, sb);
  const LieField rha = riesz(ha, j);
  const LieField rhb = riesz(hb, j);
  auto combine_pair = [&](const LieField& x, const LieField& y) {
    return combine == QCombine::product ? product(x, y) : bracket(x, y);
  };
  LieField q = combine_pair(rha, hb);
  if (variant == QVariant::same_sign_minus) {
    q -= combine_pair(ha, rhb);
  } else {
    q += combine_pair(ha, rhb);
  }
  return q;
}

double symbol_q(double tau, Vec2 xi, double lambda, Vec2 eta, int j) {
  if (j != 1 && j != 2) throw Error(ErrorKind::invalid_argument, "symbol_q: j must be 1 or 2");
  const double nx = std::hypot(xi[0], xi[1]);
  const double ne = std::hypot(eta[0], eta[1]);
  if (nx == 0.0 || ne == 0.0) throw Error(ErrorKind::invalid_argument, "symbol_q: zero spatial frequency");
  const int k = j - 1;
  return (xi[k] / nx + eta[k] / ne) * (tau + nx) * (lambda - ne);
}

bool q_far_from_cone(double tau, Vec2 xi, double lambda, Vec2 eta) {
  return std::abs(tau) >= 2.0 * std::hypot(xi[0], xi[1]) || std::abs(lambda) >= 2.0 * std::hypot(eta[0], eta[1]);
}

double q_far_bound(double tau, Vec2 xi, double lambda, Vec2 eta) {
  return 2.0 * (std::abs(tau) + std::hypot(xi[0], xi[1])) * (std::abs(lambda) + std::hypot(eta[0], eta[1]));
}

}  // namespace monopole
