#include "varcert/jacobi.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "varcert/certify.hpp"
#include "varcert/errors.hpp"

namespace varcert {

namespace {

double checked_p(const Integrand& f, const Extremal& y0, double x) {
  const double p = legendre_p_at(f, y0, x);
  if (!(p > 0.0)) throw LegendreViolation("f_zz <= 0 along the extremal; accessory equation is singular");
  return p;
}

double hermite(double h, double t, double u0, double d0, double u1, double d1) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * u1 + (t3 - t2) * h * d1;
}

}  // namespace

AccessorySolution solve_accessory(const Integrand& f, const Extremal& y0, const Grid& grid) {
  const auto n = grid.size();
  AccessorySolution sol{grid, std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::nullopt};
  const double h = grid.step();

  std::vector<double> q(n);
  for (int i = 0; i <= grid.n(); ++i) {
    sol.p[static_cast<std::size_t>(i)] = checked_p(f, y0, grid.x(i));
    q[static_cast<std::size_t>(i)] = legendre_q_at(f, y0, grid.x(i));
  }

  sol.U[0] = 0.0;
  sol.V[0] = sol.p[0];
  for (int i = 0; i < grid.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double xm = grid.x(i) + 0.5 * h;
    const double pm = checked_p(f, y0, xm);
    const double qm = legendre_q_at(f, y0, xm);
    const double u = sol.U[k], v = sol.V[k];

    const double ku1 = v / sol.p[k], kv1 = q[k] * u;
    const double ku2 = (v + 0.5 * h * kv1) / pm, kv2 = qm * (u + 0.5 * h * ku1);
    const double ku3 = (v + 0.5 * h * kv2) / pm, kv3 = qm * (u + 0.5 * h * ku2);
    const double ku4 = (v + h * kv3) / sol.p[k + 1], kv4 = q[k + 1] * (u + h * ku3);

    sol.U[k + 1] = u + h / 6.0 * (ku1 + 2 * ku2 + 2 * ku3 + ku4);
    sol.V[k + 1] = v + h / 6.0 * (kv1 + 2 * kv2 + 2 * kv3 + kv4);
    if (!std::isfinite(sol.U[k + 1]) || !std::isfinite(sol.V[k + 1]))
      throw NumericalError("accessory equation state became non-finite");
  }
  sol.conjugate_point = first_conjugate_point(sol);
  return sol;
}

std::optional<double> first_conjugate_point(const AccessorySolution& sol) {
  const Grid& g = sol.grid;
  const double h = g.step();
  for (int i = 1; i < g.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double u0 = sol.U[k], u1 = sol.U[k + 1];
    if (u0 == 0.0) return g.x(i);
    if ((u0 > 0.0) == (u1 > 0.0) && u1 != 0.0) continue;
    if (u1 == 0.0) return g.x(i + 1);

    const double d0 = sol.V[k] / sol.p[k], d1 = sol.V[k + 1] / sol.p[k + 1];
    double lo = 0.0, hi = 1.0;
    while ((hi - lo) * h > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      const double um = hermite(h, mid, u0, d0, u1, d1);
      if ((um > 0.0) == (u0 > 0.0) && um != 0.0) lo = mid;
      else hi = mid;
    }
    return g.x(i) + 0.5 * (lo + hi) * h;
  }
  return std::nullopt;
}

CriteriaComparison compare_criteria(const Integrand& f, const Extremal& y0, const Grid& grid) {
  const auto profile = legendre_profile(f, y0, grid);
  if (!(profile.p_min > 0.0)) throw LegendreViolation("f_zz <= 0 along the extremal; accessory equation is singular");
  const auto sol = solve_accessory(f, y0, grid);

  CriteriaComparison out{profile.p_min, profile.q_min, length_bound(profile.p_min, profile.q_min), std::nullopt,
                         sol.conjugate_point, std::nullopt};
  if (sol.conjugate_point) out.length_jacobi = *sol.conjugate_point - grid.a();
  if (out.length_new && out.length_jacobi) out.ratio = *out.length_jacobi / *out.length_new;
  return out;
}

}  // namespace varcert
