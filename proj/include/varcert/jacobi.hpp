#pragma once

#include <optional>
#include <vector>

#include "varcert/calculus.hpp"
#include "varcert/variational.hpp"

namespace varcert {

/// Solution of the accessory equation -(p U')' + q U = 0, U(a) = 0, U'(a) = 1,
/// carried as the system U' = V / p, V' = q U with V = p U'.
struct AccessorySolution {
  Grid grid;
  std::vector<double> U;
  std::vector<double> V;
  std::vector<double> p;  // p at the nodes, for U' = V / p
  std::optional<double> conjugate_point;
};

/// Classic RK4 on the grid nodes. Throws LegendreViolation if p <= 0 at a node
/// or step midpoint and NumericalError if the state stops being finite.
AccessorySolution solve_accessory(const Integrand& f, const Extremal& y0, const Grid& grid);

/// Smallest x* in (a, b] with U(x*) = 0. The scan starts after the first node;
/// a sign change is refined by bisection on the cubic Hermite interpolant.
std::optional<double> first_conjugate_point(const AccessorySolution& sol);

struct CriteriaComparison {
  double p_min;
  double q_min;
  std::optional<double> length_new;     // (pi/4) sqrt(p_min / |q_min|); nullopt means unbounded
  std::optional<double> length_jacobi;  // x* - a; nullopt means no conjugate point in (a, b]
  std::optional<double> conjugate_point;
  std::optional<double> ratio;          // length_jacobi / length_new when both are finite
};

CriteriaComparison compare_criteria(const Integrand& f, const Extremal& y0, const Grid& grid);

}  // namespace varcert
