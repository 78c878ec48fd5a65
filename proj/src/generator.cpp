#include "varcert/generator.hpp"

#include <cmath>
#include <stdexcept>

#include "rng.hpp"
#include "varcert/certify.hpp"
#include "varcert/errors.hpp"

namespace varcert {

std::string_view to_string(AntiderivativePath path) {
  return path == AntiderivativePath::Symbolic ? "symbolic" : "table";
}

namespace {

const Substitution kYZero{std::nullopt, Expr(), std::nullopt};
const Substitution kYZZero{std::nullopt, Expr(), Expr()};

void require_vars(const Expr& e, bool y_ok, bool z_ok, const char* name) {
  if ((!y_ok && e.depends_on(Var::Y)) || (!z_ok && e.depends_on(Var::Z)))
    throw std::invalid_argument(std::string(name) + (y_ok ? " must not depend on z" : " must depend on x only"));
}

}  // namespace

AntiderivativeTable tabulate_antiderivative(const Expr& P_y0, double a, double b, int n) {
  AntiderivativeTable t{Grid(a, b, n), std::vector<double>(static_cast<std::size_t>(n) + 1),
                        std::vector<double>(static_cast<std::size_t>(n) + 1)};
  const double h = t.grid.step();
  for (int i = 0; i <= n; ++i) t.slopes[static_cast<std::size_t>(i)] = P_y0.eval(t.grid.x(i), 0.0, 0.0);
  t.values[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double mid = P_y0.eval(t.grid.x(i) + 0.5 * h, 0.0, 0.0);
    t.values[k + 1] = t.values[k] + h / 6.0 * (t.slopes[k] + 4.0 * mid + t.slopes[k + 1]);
  }
  return t;
}

BuiltIntegrand build_zero(const GeneratorSpec& spec, int table_n) {
  require_vars(spec.P, true, false, "P");
  require_vars(spec.qfun, true, false, "qfun");
  require_vars(spec.pfun, false, false, "pfun");
  if (!std::isfinite(spec.C)) throw std::invalid_argument("C must be finite");
  const Grid check(spec.a, spec.b, table_n);
  for (int i = 0; i <= check.n(); ++i) {
    if (!(spec.pfun.eval(check.x(i), 0.0, 0.0) > 0.0))
      throw LegendreViolation("pfun <= 0 at x = " + std::to_string(check.x(i)));
  }

  std::vector<std::string> warnings;
  if (!polynomial_coefficients(spec.rho, Var::Z, 1))
    warnings.emplace_back("rho is not linear in z; the minimum is still guaranteed but bounds on rho are unchecked");

  const Expr P_y0 = substitute(diff(spec.P, Var::Y), kYZero);
  Expr A;
  AntiderivativePath path = AntiderivativePath::Symbolic;
  std::shared_ptr<const Table> table;
  if (auto F = antiderivative(P_y0, Var::X)) {
    const Expr Fa = substitute(*F, Substitution{Expr::constant(spec.a), std::nullopt, std::nullopt});
    A = simplify(*F - Fa);
  } else {
    auto t = tabulate_antiderivative(P_y0, spec.a, spec.b, table_n);
    table = std::make_shared<const Table>("A", spec.a, spec.b, std::move(t.values), std::move(t.slopes));
    A = Expr::tabulated(table, 0, x_var);
    path = AntiderivativePath::Table;
  }

  const Expr q_bracket = spec.qfun - substitute(spec.qfun, kYZero);
  const Expr rho_bracket = spec.rho - substitute(spec.rho, kYZZero);
  const Expr f = spec.P + (Expr::constant(spec.C) + A + q_bracket) * z_var +
                 0.5 * (spec.pfun + rho_bracket) * pow(z_var, 2);
  return {Integrand(simplify(f)), A, path, std::move(table), std::move(warnings)};
}

Extremal designated_extremal(const GeneratorSpec& spec) {
  return spec.y0 ? Extremal(*spec.y0, spec.a, spec.b) : Extremal::zero(spec.a, spec.b);
}

BuiltIntegrand build_shifted(const GeneratorSpec& spec, int table_n) {
  auto built = build_zero(spec, table_n);
  const auto y0 = designated_extremal(spec);
  if (y0.is_zero()) return built;
  built.f = Integrand(substitute(built.f.f(), Substitution{std::nullopt, y_var - y0.y0(), z_var - y0.y0p()}));
  return built;
}

bool is_quadratic_in_yz(const Expr& f) {
  auto cy = polynomial_coefficients(f, Var::Y, 2);
  if (!cy) return false;
  for (std::size_t k = 0; k < cy->size(); ++k) {
    if (!polynomial_coefficients((*cy)[k], Var::Z, 2 - static_cast<int>(k))) return false;
  }
  return true;
}

namespace {

GeneratorSpec draw_spec(detail::Rng& rng, double a, double b) {
  GeneratorSpec s;
  s.a = a;
  s.b = b;
  Expr P;
  const int degree = 2 + static_cast<int>(rng.below(2));
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; i + j <= degree; ++j) {
      const double c = static_cast<double>(rng.below(4001)) / 1000.0 - 2.0;
      Expr term = Expr::constant(c);
      if (i > 0) term = term * pow(x_var, i);
      if (j > 0) term = term * pow(y_var, j);
      P = P + term;
    }
  }
  s.P = simplify(P);

  switch (rng.below(3)) {
    case 0: s.qfun = Expr(); break;
    case 1: s.qfun = x_var * y_var; break;
    default: s.qfun = sin(x_var) * pow(y_var, 2); break;
  }
  switch (rng.below(3)) {
    case 0: s.pfun = Expr::constant(1.0); break;
    case 1: s.pfun = 2.0 + sin(x_var); break;
    default: s.pfun = 1.0 + pow(x_var, 2); break;
  }
  switch (rng.below(3)) {
    case 0: s.rho = Expr(); break;
    case 1: s.rho = y_var * z_var; break;
    default: s.rho = 0.1 * sin(y_var) * z_var; break;
  }
  s.C = static_cast<double>(rng.below(3)) - 1.0;
  switch (rng.below(3)) {
    case 0: s.y0 = std::nullopt; break;
    case 1: s.y0 = sin(x_var); break;
    default: s.y0 = x_var * (Expr::constant(b) - x_var); break;
  }
  return s;
}

}  // namespace

std::vector<CorpusInstance> sample_corpus(std::uint64_t seed, int count, double a, double b) {
  if (count < 1) throw std::invalid_argument("corpus count must be at least 1");
  const Grid grid(a, b, kDefaultGridN);
  std::vector<CorpusInstance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int idx = 0; idx < count; ++idx) {
    for (int attempt = 1;; ++attempt) {
      if (attempt > 10000) throw std::runtime_error("corpus sampling found no certifying instance on this interval");
      detail::Rng rng(detail::derive_seed(seed, static_cast<std::uint64_t>(idx), static_cast<std::uint64_t>(attempt)));
      auto spec = draw_spec(rng, a, b);
      auto built = build_shifted(spec);
      auto y0 = designated_extremal(spec);
      const auto cert = certify(built.f, y0, grid);
      if (!is_minimum(cert.verdict.kind)) continue;
      const bool quadratic = is_quadratic_in_yz(built.f.f());
      out.push_back({static_cast<std::size_t>(idx), std::move(spec), std::move(built), std::move(y0), quadratic, attempt});
      break;
    }
  }
  return out;
}

}  // namespace varcert
