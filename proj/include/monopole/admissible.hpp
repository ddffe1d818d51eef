#pragma once
// Parameter windows for the iteration estimates, the elliptic estimates and
// the bilinear estimate with D^-sigma. Every window is a pure function of s
// (and a where given); empty windows are data, not errors.
//
// Exponent windows are stated for reciprocals: inv_q = 1/q, inv_p = 1/p.

#include <optional>
#include <vector>

namespace monopole {

struct Interval {
  double lower = 0.0, upper = 0.0;
  bool lower_closed = false, upper_closed = false;

  bool empty() const noexcept;
  bool contains(double x) const noexcept;
  // n equally spaced points strictly inside; none if empty.
  std::vector<double> interior(int n) const;
};

Interval intersect(const Interval& a, const Interval& b);

// 0 <= eps < min(2s - 1/2, 1/2)
Interval epsilon_window(double s);
// 3/4 - eps/2 < theta <= s + 1/2 - eps, theta < 1 - eps
Interval theta_window(double s, double eps);
// Norm of A_0: 1/p~ in (1 - 2s, 1/2); also the L^p_t L^inf_x range of A_0.
Interval inv_p_tilde_window(double s);
// max((1-2s)/3, s/2) < 1/q < 2s/3, paired with 2/p = 1 - 1/q
Interval aspqs_inv_q_window(double s);
double aspqs_inv_p(double inv_q);

// Elliptic windows for the regularity index a. Theorem-level hypotheses on a
// (range of a, s > 1/4) are reported through the applies flags; when a window
// does not apply it is returned empty.
Interval cq1_window(double s, double a);
Interval cp1_window(double s, double a, double inv_q);
bool cq2_applies(double s, double a);
Interval cq2_window(double s, double a);
Interval cp2_window(double s, double a, double inv_q);
bool cq3_applies(double s, double a);
Interval cq3_window(double s, double a);
Interval cp3_window(double s, double a, double inv_q);

// 1 - 2/p <= 1/q < 1/2 and 2/q - 1/2 + 1/p <= s; the non-strict
// inequalities are accepted within tol (the first is an equality on aspqs).
bool newpq_holds(double s, double inv_p, double inv_q, double tol = 1e-12);

struct KTParams {
  double sigma = 0.0, inv_p = 0.0, inv_q = 0.0, s1 = 0.0, s2 = 0.0;
};

struct KTFlags {
  bool c1 = false, c2 = false, c3 = false, c4 = false;
  bool exponents = false;  // 1 <= p <= inf, 1 <= q < inf
  bool all() const noexcept { return c1 && c2 && c3 && c4 && exponents; }
};

// c4 is an equality; it is accepted within tol.
KTFlags kt_conditions(const KTParams& k, double tol = 1e-12);

struct EllipticWindows {
  double a;
  Interval cq1, cq2, cq3;
  bool cq2_applies, cq3_applies;
  // 1/p windows at the midpoint of the matching 1/q window (empty if it is).
  Interval cp1_mid, cp2_mid, cp3_mid;
};

struct ParamWindow {
  double s;
  Interval epsilon;
  Interval theta;  // at eps = epsilon.lower, empty when epsilon is
  Interval inv_p_tilde;
  Interval inv_q;  // aspqs
  std::optional<EllipticWindows> elliptic;

  bool epsilon_empty() const noexcept { return epsilon.empty(); }
};

// Throws Error{invalid_argument} for s <= 0.
ParamWindow admissible_params(double s, std::optional<double> a = std::nullopt);

// Whether (s, eps, theta) lie in the iteration windows.
bool iteration_params_admissible(double s, double eps, double theta);

}  // namespace monopole
