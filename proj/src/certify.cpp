#include "varcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "varcert/errors.hpp"

namespace varcert {

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::MinimumUnconditional: return "MinimumUnconditional";
    case VerdictKind::MinimumUnderLength: return "MinimumUnderLength";
    case VerdictKind::Inconclusive: return "Inconclusive";
    case VerdictKind::LegendreFailed: return "LegendreFailed";
    case VerdictKind::EulerLagrangeFailed: return "EulerLagrangeFailed";
  }
  return "?";
}

bool is_minimum(VerdictKind kind) {
  return kind == VerdictKind::MinimumUnconditional || kind == VerdictKind::MinimumUnderLength;
}

std::optional<double> length_bound(double p_min, double q_min) {
  if (!(p_min > 0.0)) throw PreconditionError("length bound requires p_min > 0");
  if (q_min >= 0.0) return std::nullopt;
  return std::numbers::pi / 4.0 * std::sqrt(p_min / std::abs(q_min));
}

Verdict classify(double p_min, double q_min, double el_max, double a, double b, double el_tol) {
  if (!(a < b)) throw std::invalid_argument("classify: require a < b");
  if (el_max > el_tol) return {VerdictKind::EulerLagrangeFailed, std::nullopt, el_max};
  if (!(p_min > 0.0)) return {VerdictKind::LegendreFailed, std::nullopt, el_max};
  if (q_min >= 0.0) return {VerdictKind::MinimumUnconditional, std::nullopt, el_max};
  const double bound = *length_bound(p_min, q_min);
  if (b - a < bound) return {VerdictKind::MinimumUnderLength, bound, el_max};
  return {VerdictKind::Inconclusive, std::nullopt, el_max};
}

Verdict classify(const LegendreProfile& profile, double el_max, double a, double b, double el_tol) {
  return classify(profile.p_min, profile.q_min, el_max, a, b, el_tol);
}

std::optional<double> quad_coefficient(double p_min, double q_min, double a, double b) {
  if (!(p_min > 0.0)) throw PreconditionError("quad_coefficient requires p_min > 0");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double len = b - a;
  const double denom = 2.0 * (pi2 + 16.0 * len * len);
  const double friedrichs_case = pi2 * p_min / denom;
  if (q_min > 0.0) return std::max(0.5 * std::min(p_min, q_min), friedrichs_case);
  if (q_min == 0.0) return friedrichs_case;
  const auto bound = length_bound(p_min, q_min);
  if (!(len < *bound)) return std::nullopt;
  return (pi2 * p_min - 16.0 * len * len * std::abs(q_min)) / denom;
}

Certificate certify(const Integrand& f, const Extremal& y0, const Grid& grid, double el_tol, bool sobolev_note) {
  check_finite_partials(f, y0, grid);
  const auto residual = el_residual(f, y0, grid);
  double el_max = 0.0;
  for (double r : residual) el_max = std::max(el_max, std::abs(r));
  const auto profile = legendre_profile(f, y0, grid);

  Certificate cert{classify(profile, el_max, grid.a(), grid.b(), el_tol),
                   profile.p_min,
                   profile.q_min,
                   grid.length(),
                   std::nullopt,
                   std::nullopt,
                   grid.n(),
                   sobolev_note};
  if (profile.p_min > 0.0) cert.length_criterion = length_bound(profile.p_min, profile.q_min);
  if (is_minimum(cert.verdict.kind))
    cert.quad_coefficient = quad_coefficient(profile.p_min, profile.q_min, grid.a(), grid.b());
  return cert;
}

}  // namespace varcert
