#include "varcert/variational.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace varcert {

struct Integrand::Partials {
  std::array<std::once_flag, static_cast<std::size_t>(Partial::Count)> once;
  std::array<Expr, static_cast<std::size_t>(Partial::Count)> expr;
};

Integrand::Integrand(Expr f) : f_(std::move(f)), partials_(std::make_shared<Partials>()) {}

const Expr& Integrand::partial(Partial which) const {
  const auto idx = static_cast<std::size_t>(which);
  std::call_once(partials_->once[idx], [&] {
    Expr& slot = partials_->expr[idx];
    switch (which) {
      case Partial::Y: slot = diff(f_, Var::Y); break;
      case Partial::Z: slot = diff(f_, Var::Z); break;
      case Partial::YY: slot = diff(f_y(), Var::Y); break;
      case Partial::YZ: slot = diff(f_y(), Var::Z); break;
      case Partial::ZZ: slot = diff(f_z(), Var::Z); break;
      case Partial::XZ: slot = diff(f_z(), Var::X); break;
      case Partial::XYZ: slot = diff(f_yz(), Var::X); break;
      case Partial::YYZ: slot = diff(f_yz(), Var::Y); break;
      case Partial::YZZ: slot = diff(f_yz(), Var::Z); break;
      case Partial::Count: throw std::logic_error("invalid partial");
    }
  });
  return partials_->expr[idx];
}

Extremal::Extremal(Expr y0, double a, double b) : y0_(std::move(y0)), a_(a), b_(b) {
  if (y0_.depends_on(Var::Y) || y0_.depends_on(Var::Z))
    throw std::invalid_argument("extremal must be an expression in x only");
  if (!(a < b)) throw std::invalid_argument("extremal: require a < b");
  y0p_ = diff(y0_, Var::X);
  y0pp_ = diff(y0p_, Var::X);
}

Extremal Extremal::zero(double a, double b) { return Extremal(Expr(), a, b); }

Extremal::Point Extremal::at(double x) const {
  return {x, y0_.eval(x, 0.0, 0.0), y0p_.eval(x, 0.0, 0.0), y0pp_.eval(x, 0.0, 0.0)};
}

namespace {

void check_grid(const Extremal& y0, const Grid& grid) {
  const double tol = 1e-12 * std::max(1.0, std::abs(y0.a()) + std::abs(y0.b()));
  if (std::abs(grid.a() - y0.a()) > tol || std::abs(grid.b() - y0.b()) > tol)
    throw std::invalid_argument("grid interval does not match the extremal's [a, b]");
}

double eval_at(const Expr& e, const Extremal::Point& pt) { return e.eval(pt.x, pt.y, pt.yp); }

// d/dx g(x, y0(x), y0'(x)) via the chain rule, given g_x, g_y, g_z.
double total_derivative(const Expr& gx, const Expr& gy, const Expr& gz, const Extremal::Point& pt) {
  return eval_at(gx, pt) + eval_at(gy, pt) * pt.yp + eval_at(gz, pt) * pt.ypp;
}

double central_difference(const Expr& g, const Extremal& y0, double x) {
  const double h = (y0.b() - y0.a()) * 1e-5;
  return (eval_at(g, y0.at(x + h)) - eval_at(g, y0.at(x - h))) / (2.0 * h);
}

double residual_at(const Integrand& f, const Extremal& y0, double x, DerivativeMode mode) {
  const auto pt = y0.at(x);
  const double dfz = mode == DerivativeMode::Symbolic ? total_derivative(f.f_xz(), f.f_yz(), f.f_zz(), pt)
                                                      : central_difference(f.f_z(), y0, x);
  return eval_at(f.f_y(), pt) - dfz;
}

double q_at(const Integrand& f, const Extremal& y0, double x, DerivativeMode mode) {
  const auto pt = y0.at(x);
  const double dfyz = mode == DerivativeMode::Symbolic ? total_derivative(f.f_xyz(), f.f_yyz(), f.f_yzz(), pt)
                                                       : central_difference(f.f_yz(), y0, x);
  return eval_at(f.f_yy(), pt) - dfyz;
}

}  // namespace

std::vector<double> el_residual(const Integrand& f, const Extremal& y0, const Grid& grid, DerivativeMode mode) {
  check_grid(y0, grid);
  std::vector<double> r(grid.size());
  for (int i = 0; i <= grid.n(); ++i) r[static_cast<std::size_t>(i)] = residual_at(f, y0, grid.x(i), mode);
  return r;
}

double legendre_p_at(const Integrand& f, const Extremal& y0, double x) { return eval_at(f.f_zz(), y0.at(x)); }

double legendre_q_at(const Integrand& f, const Extremal& y0, double x) {
  return q_at(f, y0, x, DerivativeMode::Symbolic);
}

LegendreProfile legendre_profile(const Integrand& f, const Extremal& y0, const Grid& grid, DerivativeMode mode) {
  check_grid(y0, grid);
  LegendreProfile prof{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size()), 0.0, 0.0};
  for (int i = 0; i <= grid.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    prof.p[k] = legendre_p_at(f, y0, grid.x(i));
    prof.q[k] = q_at(f, y0, grid.x(i), mode);
  }
  prof.p_min = *std::min_element(prof.p.begin(), prof.p.end());
  prof.q_min = *std::min_element(prof.q.begin(), prof.q.end());
  return prof;
}

double QuadraticDecomposition::eval_R(double x, double y, double z) const {
  if (r_exact || std::abs(z) >= 1e-4) return R.eval(x, y, z);
  return R_at_zero.eval(x, y, 0.0) + R_slope.eval(x, y, 0.0) * z;
}

QuadraticDecomposition decompose(const Integrand& f) {
  const Substitution at_z0{std::nullopt, std::nullopt, Expr()};
  QuadraticDecomposition d;
  d.P = substitute(f.f(), at_z0);
  d.Q = substitute(f.f_z(), at_z0);
  d.R_at_zero = substitute(f.f_zz(), at_z0);
  d.R_slope = simplify(Expr::constant(1.0 / 3.0) * substitute(diff(f.f_zz(), Var::Z), at_z0));
  if (auto c = polynomial_coefficients(f.f(), Var::Z, 8)) {
    Expr r;
    for (std::size_t k = c->size(); k-- > 2;) r = r * z_var + (*c)[k];
    d.R = simplify(Expr::constant(2.0) * r);
    d.r_exact = true;
  } else {
    d.R = simplify(Expr::constant(2.0) * (f.f() - d.P - d.Q * z_var) / pow(z_var, 2));
    d.r_exact = false;
  }
  return d;
}

Integrand shift(const Integrand& f, const Extremal& y0) {
  if (y0.is_zero()) return f;
  return Integrand(substitute(f.f(), Substitution{std::nullopt, y_var + y0.y0(), z_var + y0.y0p()}));
}

double action(const Integrand& f, const SampledPath& path) {
  std::vector<double> v(path.grid.size());
  for (int i = 0; i <= path.grid.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    v[k] = f.f().eval(path.grid.x(i), path.y[k], path.yp[k]);
  }
  return integrate(v, path.grid);
}

void check_finite_partials(const Integrand& f, const Extremal& y0, const Grid& grid) {
  check_grid(y0, grid);
  for (int i = 0; i <= grid.n(); ++i) {
    const auto pt = y0.at(grid.x(i));
    eval_at(f.f(), pt);
    for (std::size_t k = 0; k < static_cast<std::size_t>(Integrand::Partial::Count); ++k)
      eval_at(f.partial(static_cast<Integrand::Partial>(k)), pt);
  }
}

}  // namespace varcert
