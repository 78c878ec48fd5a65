#pragma once

#include <optional>
#include <string_view>

#include "varcert/calculus.hpp"
#include "varcert/variational.hpp"

namespace varcert {

enum class VerdictKind {
  MinimumUnconditional,  // p > 0, q >= 0
  MinimumUnderLength,    // p > 0, q < 0, b - a below the length bound
  Inconclusive,          // criterion silent; not a disproof of minimality
  LegendreFailed,
  EulerLagrangeFailed,
};

std::string_view to_string(VerdictKind kind);
bool is_minimum(VerdictKind kind);

struct Verdict {
  VerdictKind kind;
  std::optional<double> length_bound;  // present iff kind == MinimumUnderLength
  double el_residual_max;
};

/// Strong-minimum certificate at y0. Minima only: for a maximum, certify -f.
struct Certificate {
  Verdict verdict;
  double p_min;
  double q_min;
  double interval_length;
  /// (pi/4) sqrt(p_min / |q_min|) whenever p_min > 0 and q_min < 0, reported
  /// even when the interval is too long for it.
  std::optional<double> length_criterion;
  /// c in Phi(y) - Phi(y0) >= c ||y - y0||^2_{H^1} near y0.
  std::optional<double> quad_coefficient;
  int grid_n;
  bool k_extremum_note;
};

inline constexpr double kDefaultElTol = 1e-8;

/// (pi/4) sqrt(p / |q|) for q < 0; nullopt when q >= 0 (no restriction).
/// Requires p > 0.
std::optional<double> length_bound(double p_min, double q_min);

Verdict classify(double p_min, double q_min, double el_max, double a, double b, double el_tol);
Verdict classify(const LegendreProfile& profile, double el_max, double a, double b, double el_tol);

/// Coercivity constant for the H^1 lower bound:
///   q > 0:  max(min(p, q) / 2, pi^2 p / (2 (pi^2 + 16 L^2)))
///   q = 0:  pi^2 p / (2 (pi^2 + 16 L^2))
///   q < 0:  (pi^2 p - 16 L^2 |q|) / (2 (pi^2 + 16 L^2)) while L is below the
///           length bound, otherwise nullopt.
/// Throws PreconditionError unless p_min > 0.
std::optional<double> quad_coefficient(double p_min, double q_min, double a, double b);

/// el_residual -> legendre_profile -> classify -> quad_coefficient.
Certificate certify(const Integrand& f, const Extremal& y0, const Grid& grid, double el_tol = kDefaultElTol,
                    bool sobolev_note = false);

}  // namespace varcert
