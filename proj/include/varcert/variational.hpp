#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "varcert/calculus.hpp"
#include "varcert/expr.hpp"

namespace varcert {

/// Integrand f(x, y, z) of Phi(y) = int_a^b f(x, y, y') dx, z standing for y'.
///
/// All partials are derived symbolically from f on first use and shared by
/// copies of the same Integrand.
class Integrand {
 public:
  enum class Partial : std::size_t { Y, Z, YY, YZ, ZZ, XZ, XYZ, YYZ, YZZ, Count };

  explicit Integrand(Expr f);

  const Expr& f() const noexcept { return f_; }
  const Expr& partial(Partial which) const;

  const Expr& f_y() const { return partial(Partial::Y); }
  const Expr& f_z() const { return partial(Partial::Z); }
  const Expr& f_yy() const { return partial(Partial::YY); }
  const Expr& f_yz() const { return partial(Partial::YZ); }
  const Expr& f_zz() const { return partial(Partial::ZZ); }
  const Expr& f_xz() const { return partial(Partial::XZ); }
  const Expr& f_xyz() const { return partial(Partial::XYZ); }
  const Expr& f_yyz() const { return partial(Partial::YYZ); }
  const Expr& f_yzz() const { return partial(Partial::YZZ); }

 private:
  struct Partials;
  Expr f_;
  std::shared_ptr<Partials> partials_;
};

/// Candidate extremal y0(x) on [a, b] with symbolic y0' and y0''.
class Extremal {
 public:
  Extremal(Expr y0, double a, double b);
  static Extremal zero(double a, double b);

  const Expr& y0() const noexcept { return y0_; }
  const Expr& y0p() const noexcept { return y0p_; }
  const Expr& y0pp() const noexcept { return y0pp_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  bool is_zero() const noexcept { return y0_.is_constant(0.0); }

  struct Point {
    double x, y, yp, ypp;
  };
  Point at(double x) const;

 private:
  Expr y0_, y0p_, y0pp_;
  double a_, b_;
};

struct LegendreProfile {
  Grid grid;
  std::vector<double> p;  // f_zz along the extremal
  std::vector<double> q;  // f_yy - d/dx f_yz along the extremal
  double p_min;
  double q_min;
};

/// f = P(x, y) + Q(x, y) z + R(x, y, z) z^2 / 2.
struct QuadraticDecomposition {
  Expr P;
  Expr Q;
  /// Exact R when f is polynomial in z; otherwise 2 (f - P - Q z) / z^2,
  /// which has a removable singularity at z = 0.
  Expr R;
  bool r_exact = false;
  Expr R_at_zero;   // f_zz(x, y, 0)
  Expr R_slope;     // f_zzz(x, y, 0) / 3, first Taylor term of R in z

  /// R with the limiting value near z = 0.
  double eval_R(double x, double y, double z) const;
};

/// How d/dx of a partial along y0 is formed.
enum class DerivativeMode {
  Symbolic,           // exact chain rule through third-order partials
  CentralDifference,  // h = (b - a) * 1e-5, for cross-checking only
};

/// Euler-Lagrange residual f_y - d/dx f_z along y0 at every grid node.
std::vector<double> el_residual(const Integrand& f, const Extremal& y0, const Grid& grid,
                                DerivativeMode mode = DerivativeMode::Symbolic);

LegendreProfile legendre_profile(const Integrand& f, const Extremal& y0, const Grid& grid,
                                 DerivativeMode mode = DerivativeMode::Symbolic);

/// p(x) and q(x) of the profile at an arbitrary point.
double legendre_p_at(const Integrand& f, const Extremal& y0, double x);
double legendre_q_at(const Integrand& f, const Extremal& y0, double x);

QuadraticDecomposition decompose(const Integrand& f);

/// f~(x, y, z) = f(x, y + y0(x), z + y0'(x)).
Integrand shift(const Integrand& f, const Extremal& y0);

/// int_a^b f(x, y, y') dx along sampled path values.
double action(const Integrand& f, const SampledPath& path);

/// Evaluates every partial along y0 at each node; throws DomainError otherwise.
void check_finite_partials(const Integrand& f, const Extremal& y0, const Grid& grid);

}  // namespace varcert
