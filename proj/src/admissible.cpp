#include "monopole/admissible.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "monopole/error.hpp"

namespace monopole {

namespace {

Interval open(double lo, double hi) { return {lo, hi, false, false}; }

Interval empty_interval() { return {1.0, 0.0, false, false}; }

}  // namespace

bool Interval::empty() const noexcept {
  if (lower < upper) return false;
  if (lower == upper) return !(lower_closed && upper_closed);
  return true;
}

bool Interval::contains(double x) const noexcept {
  const bool lo = lower_closed ? x >= lower : x > lower;
  const bool hi = upper_closed ? x <= upper : x < upper;
  return lo && hi;
}

std::vector<double> Interval::interior(int n) const {
  std::vector<double> out;
  if (empty() || !(lower < upper)) return out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out.push_back(lower + (upper - lower) * (k + 1) / (n + 1));
  }
  return out;
}

Interval intersect(const Interval& a, const Interval& b) {
  Interval r;
  if (a.lower > b.lower) {
    r.lower = a.lower;
    r.lower_closed = a.lower_closed;
  } else if (b.lower > a.lower) {
    r.lower = b.lower;
    r.lower_closed = b.lower_closed;
  } else {
    r.lower = a.lower;
    r.lower_closed = a.lower_closed && b.lower_closed;
  }
  if (a.upper < b.upper) {
    r.upper = a.upper;
    r.upper_closed = a.upper_closed;
  } else if (b.upper < a.upper) {
    r.upper = b.upper;
    r.upper_closed = b.upper_closed;
  } else {
    r.upper = a.upper;
    r.upper_closed = a.upper_closed && b.upper_closed;
  }
  return r;
}

Interval epsilon_window(double s) { return {0.0, std::min(2.0 * s - 0.5, 0.5), true, false}; }

Interval theta_window(double s, double eps) {
  const Interval upper_pair = {0.75 - eps / 2.0, s + 0.5 - eps, false, true};
  return intersect(upper_pair, open(-std::numeric_limits<double>::infinity(), 1.0 - eps));
}

Interval inv_p_tilde_window(double s) { return open(1.0 - 2.0 * s, 0.5); }

Interval aspqs_inv_q_window(double s) {
  return open(std::max((1.0 - 2.0 * s) / 3.0, s / 2.0), 2.0 * s / 3.0);
}

double aspqs_inv_p(double inv_q) { return (1.0 - inv_q) / 2.0; }

Interval cq1_window(double s, double a) {
  if (a < 0.0 || a > s + 1.0) return empty_interval();
  const double lo = std::max({(1.0 + 2.0 * a - 4.0 * s) / 3.0, (1.0 + a - 4.0 * s) / 2.0,
                              std::min(a, 1.0) / 2.0});
  // 1 < q < inf
  return intersect(open(lo, (1.0 + a) / 2.0), open(0.0, 1.0));
}

Interval cp1_window(double s, double a, double inv_q) {
  const Interval w = {1.0 - 2.0 * inv_q + a - 2.0 * s, (1.0 - inv_q) / 2.0, true, true};
  const Interval strict = open(-std::numeric_limits<double>::infinity(), 1.0 - 2.0 * inv_q + a);
  // 1 <= p <= inf
  return intersect(intersect(w, strict), {0.0, 1.0, true, true});
}

bool cq2_applies(double s, double a) { return a > 0.0 && a < std::min(2.0 * s, 1.0); }

Interval cq2_window(double s, double a) {
  if (!cq2_applies(s, a)) return empty_interval();
  return open(std::max(0.5 + a - 2.0 * s, a / 2.0), 0.5);
}

Interval cp2_window(double s, double a, double inv_q) {
  const Interval w = {1.0 - 2.0 * inv_q + a - 2.0 * s, 0.5 - inv_q, true, false};
  return intersect(w, {0.0, 1.0, true, true});
}

bool cq3_applies(double s, double a) {
  return s > 0.25 && a > 0.0 && a < std::min({4.0 * s - 1.0, 1.0 + s, 2.0 * s});
}

Interval cq3_window(double s, double a) {
  if (!cq3_applies(s, a)) return empty_interval();
  return open(std::max((a - s) / 2.0, 0.5 + a - 2.0 * s), std::min(a, 1.0) / 2.0);
}

Interval cp3_window(double s, double a, double inv_q) { return cp2_window(s, a, inv_q); }

bool newpq_holds(double s, double inv_p, double inv_q, double tol) {
  return 1.0 - 2.0 * inv_p <= inv_q + tol && inv_q < 0.5 && 2.0 * inv_q - 0.5 + inv_p <= s + tol;
}

KTFlags kt_conditions(const KTParams& k, double tol) {
  KTFlags f;
  f.exponents = k.inv_p >= 0.0 && k.inv_p <= 1.0 && k.inv_q > 0.0 && k.inv_q <= 1.0;
  f.c1 = k.inv_p <= 0.5 * (1.0 - k.inv_q);
  f.c2 = 0.0 < k.sigma && k.sigma < 2.0 * (1.0 - k.inv_q - k.inv_p);
  const double bound = 1.0 - k.inv_q - 0.5 * k.inv_p;
  f.c3 = k.s1 < bound && k.s2 < bound;
  f.c4 = std::abs(k.s1 + k.s2 + k.sigma - 2.0 * bound) <= tol;
  return f;
}

namespace {

double midpoint(const Interval& w) { return 0.5 * (w.lower + w.upper); }

}  // namespace

ParamWindow admissible_params(double s, std::optional<double> a) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorKind::invalid_argument, "admissible_params: s must be positive");
  }
  ParamWindow w{s, epsilon_window(s), empty_interval(), inv_p_tilde_window(s), aspqs_inv_q_window(s), {}};
  if (!w.epsilon.empty()) w.theta = theta_window(s, w.epsilon.lower);
  if (a) {
    EllipticWindows e{*a, cq1_window(s, *a), cq2_window(s, *a), cq3_window(s, *a),
                      cq2_applies(s, *a), cq3_applies(s, *a), empty_interval(), empty_interval(),
                      empty_interval()};
    if (!e.cq1.empty()) e.cp1_mid = cp1_window(s, *a, midpoint(e.cq1));
    if (!e.cq2.empty()) e.cp2_mid = cp2_window(s, *a, midpoint(e.cq2));
    if (!e.cq3.empty()) e.cp3_mid = cp3_window(s, *a, midpoint(e.cq3));
    w.elliptic = e;
  }
  return w;
}

bool iteration_params_admissible(double s, double eps, double theta) {
  return epsilon_window(s).contains(eps) && theta_window(s, eps).contains(theta);
}

}  // namespace monopole
