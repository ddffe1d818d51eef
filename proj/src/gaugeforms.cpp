#include "monopole/gaugeforms.hpp"

#include <cmath>
#include <string>

#include "monopole/error.hpp"

namespace monopole {

int form_component_count(int degree, Metric metric) {
  const int dim = metric == Metric::euclidean ? 2 : 3;
  if (degree < 0 || degree > dim) return 0;
  int c = 1;
  for (int k = 0; k < degree; ++k) c = c * (dim - k) / (k + 1);
  return c;
}

FormField hodge_star(const FormField& w) {
  const int expected = form_component_count(w.degree, w.metric);
  if (expected == 0) {
    throw Error(ErrorKind::unsupported_degree, "hodge_star: degree " + std::to_string(w.degree));
  }
  if (static_cast<int>(w.components.size()) != expected) {
    throw Error(ErrorKind::invalid_argument, "hodge_star: expected " + std::to_string(expected) +
                                                 " components, got " +
                                                 std::to_string(w.components.size()));
  }
  const auto& c = w.components;
  FormField out;
  out.metric = w.metric;
  if (w.metric == Metric::euclidean) {
    switch (w.degree) {
      case 0:  // *1 = dx^dy
        out.degree = 2;
        out.components = {c[0]};
        break;
      case 1:  // *dx = dy, *dy = -dx
        out.degree = 1;
        out.components = {-c[1], c[0]};
        break;
      case 2:  // *(dx^dy) = 1
        out.degree = 0;
        out.components = {c[0]};
        break;
    }
    return out;
  }
  switch (w.degree) {
    case 1:  // *dt = dx^dy, *dx = dt^dy, *dy = -dt^dx
      out.degree = 2;
      out.components = {-c[2], c[1], c[0]};
      break;
    case 2:  // inverse of the above up to ** = -1
      out.degree = 1;
      out.components = {-c[2], -c[1], c[0]};
      break;
    default:
      // The orientation of the volume form is not fixed by the 1-form table.
      throw Error(ErrorKind::unsupported_degree,
                  "hodge_star: minkowski degree " + std::to_string(w.degree));
  }
  return out;
}

const LieField& Connection::operator[](int alpha) const {
  switch (alpha) {
    case 0: return a0;
    case 1: return a1;
    case 2: return a2;
  }
  throw Error(ErrorKind::invalid_argument, "Connection: index " + std::to_string(alpha));
}

Connection Connection::zero(TorusGrid grid, int rank) {
  return {LieField(grid, rank, "A0"), LieField(grid, rank, "A1"), LieField(grid, rank, "A2")};
}

namespace {

void check_index(int alpha, const char* where) {
  if (alpha < 0 || alpha > 2) {
    throw Error(ErrorKind::invalid_argument, std::string(where) + ": index " + std::to_string(alpha));
  }
}

const LieField& rate_of_a(const TimeRates* rates, int i) {
  const std::optional<LieField>* slot = nullptr;
  if (rates) slot = i == 1 ? &rates->a1 : &rates->a2;
  if (!slot || !*slot) {
    throw Error(ErrorKind::missing_time_derivative,
                "curvature: d_t A_" + std::to_string(i) + " not supplied");
  }
  return **slot;
}

LieField conjugate(const LieField& g, const LieField& x, const LieField& g_inv) {
  return product(product(g, x), g_inv);
}

}  // namespace

LieField curvature(const Connection& a, int alpha, int beta, const TimeRates* rates) {
  check_index(alpha, "curvature");
  check_index(beta, "curvature");
  if (alpha == beta) return LieField(a.a0.grid(), a.a0.rank());
  if (alpha > beta) return -curvature(a, beta, alpha, rates);

  LieField f(a.a0.grid(), a.a0.rank());
  if (alpha == 0) {
    f = rate_of_a(rates, beta);
    f -= partial_derivative(a.a0, beta);
  } else {
    f = partial_derivative(a.a2, 1);
    f -= partial_derivative(a.a1, 2);
  }
  f += bracket(a[alpha], a[beta]);
  return f;
}

LieField covariant_derivative(const Connection& a, const LieField& phi, int alpha,
                              const TimeRates* rates) {
  check_index(alpha, "covariant_derivative");
  LieField d(phi.grid(), phi.rank());
  if (alpha == 0) {
    if (!rates || !rates->phi) {
      throw Error(ErrorKind::missing_time_derivative, "covariant_derivative: d_t phi not supplied");
    }
    d = *rates->phi;
  } else {
    d = partial_derivative(phi, alpha);
  }
  d += bracket(a[alpha], phi);
  return d;
}

MonopoleResidual monopole_residual(const Connection& a, const LieField& phi, const TimeRates& rates) {
  return {covariant_derivative(a, phi, 0, &rates) - curvature(a, 1, 2, &rates),
          covariant_derivative(a, phi, 1, &rates) - curvature(a, 0, 2, &rates),
          covariant_derivative(a, phi, 2, &rates) - curvature(a, 1, 0, &rates)};
}

GaugeTransformed gauge_transform(const Connection& a, const LieField& phi, const LieField& g,
                                 const LieField* g_t, const TimeRates* rates) {
  a.a0.require_compatible(g, "gauge_transform");
  const int n = g.grid().points();
  const Matrix id = Matrix::identity(g.rank());
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const Matrix m = g.at(ix, iy);
      if (frobenius_norm(m * m.adjoint() - id) > 1e-8 || std::abs(determinant(m) - 1.0) > 1e-8) {
        throw Error(ErrorKind::non_unitary, "gauge_transform: g is not special unitary at (" +
                                                std::to_string(ix) + ", " + std::to_string(iy) + ")");
      }
    }

  const LieField g_inv = adjoint(g);
  LieField a0 = conjugate(g, a.a0, g_inv);
  if (g_t) a0 -= product(*g_t, g_inv);
  LieField a1 = conjugate(g, a.a1, g_inv) + product(g, partial_derivative(g_inv, 1));
  LieField a2 = conjugate(g, a.a2, g_inv) + product(g, partial_derivative(g_inv, 2));
  GaugeTransformed out{{std::move(a0), std::move(a1), std::move(a2)}, conjugate(g, phi, g_inv), std::nullopt};

  if (rates) {
    // d_t(g X g^-1) and d_t(g d_i g^-1), the g_t terms dropping out when g is static.
    auto moving = [&](const LieField& x, const LieField& x_t) {
      LieField r = conjugate(g, x_t, g_inv);
      if (g_t) {
        const LieField g_t_inv = adjoint(*g_t);
        r += product(product(*g_t, x), g_inv);
        r += product(product(g, x), g_t_inv);
      }
      return r;
    };
    auto connection_rate = [&](int i, const LieField& x, const LieField& x_t) {
      LieField r = moving(x, x_t);
      if (g_t) {
        const LieField g_t_inv = adjoint(*g_t);
        r += product(*g_t, partial_derivative(g_inv, i));
        r += product(g, partial_derivative(g_t_inv, i));
      }
      return r;
    };
    TimeRates tr;
    if (rates->a1) tr.a1 = connection_rate(1, a.a1, *rates->a1);
    if (rates->a2) tr.a2 = connection_rate(2, a.a2, *rates->a2);
    if (rates->phi) tr.phi = moving(phi, *rates->phi);
    out.rates = std::move(tr);
  }
  return out;
}

LieField divergence(const LieField& a1, const LieField& a2) {
  return partial_derivative(a1, 1) + partial_derivative(a2, 2);
}

CoulombResult coulomb_project(const LieField& a1, const LieField& a2, const CoulombOptions& opt) {
  a1.require_compatible(a2, "coulomb_project");
  const Multiplier bessel = Multiplier::bessel(opt.sobolev_s);
  const double size = l2_norm(apply_multiplier(a1, bessel)) + l2_norm(apply_multiplier(a2, bessel));
  if (size > opt.smallness) {
    throw Error(ErrorKind::smallness_violated, "coulomb_project: ||a||_{H^s} = " + std::to_string(size) +
                                                   " exceeds threshold " + std::to_string(opt.smallness));
  }

  const TorusGrid grid = a1.grid();
  CoulombResult res{LieField::constant(grid, Matrix::identity(a1.rank()), "g"), a1, a2, 0, {}};
  const Connection base{LieField(grid, a1.rank()), a1, a2};
  const LieField phi_dummy(grid, a1.rank());
  for (;;) {
    const double scale = l2_norm(res.a1) + l2_norm(res.a2);
    const LieField div = divergence(res.a1, res.a2);
    const double rel = scale > 0 ? l2_norm(div) / scale : 0.0;
    res.divergence_history.push_back(rel);
    if (rel <= opt.tol_c) return res;
    const std::size_t k = res.divergence_history.size();
    if (k > 1 && rel >= res.divergence_history[k - 2]) {
      throw Error(ErrorKind::smallness_violated,
                  "coulomb_project: divergence stopped decreasing at iteration " + std::to_string(res.iterations));
    }
    if (res.iterations >= opt.max_iterations) {
      throw Error(ErrorKind::smallness_violated, "coulomb_project: no convergence in " +
                                                     std::to_string(opt.max_iterations) + " iterations");
    }
    // The divergence has no zero mode; drop the round-off mean, which is not
    // small relative to div itself once div is near tol_c.
    const LieField chi = inverse_laplacian(div - LieField::constant(grid, div.mean()));
    res.g = product(field_exp(chi), res.g);
    auto moved = gauge_transform(base, phi_dummy, res.g);
    res.a1 = std::move(moved.a.a1);
    res.a2 = std::move(moved.a.a2);
    ++res.iterations;
  }
}

}  // namespace monopole
