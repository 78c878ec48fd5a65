#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "varcert/generator.hpp"
#include "varcert/variational.hpp"

using namespace varcert;

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(ElResidual, Examples) {
  const Grid g01(0, 1, 64);
  EXPECT_EQ(max_abs(el_residual(Integrand(parse("z^2")), Extremal::zero(0, 1), g01)), 0.0);

  const Grid g03(0, 3, 64);
  EXPECT_LE(max_abs(el_residual(Integrand(parse("z^2 - y^2")), Extremal(parse("sin(x)"), 0, 3), g03)), 1e-12);

  const auto r = el_residual(Integrand(parse("z^2 - y^2")), Extremal(parse("x"), 0, 1), g01);
  for (int i = 0; i <= g01.n(); ++i) EXPECT_NEAR(r[static_cast<std::size_t>(i)], -2 * g01.x(i), 1e-14);
  EXPECT_DOUBLE_EQ(max_abs(r), 2.0);
}

TEST(ElResidual, GridMustMatchExtremal) {
  EXPECT_THROW(el_residual(Integrand(parse("z^2")), Extremal::zero(0, 1), Grid(0, 2, 8)), std::invalid_argument);
}

TEST(ElResidual, LinearInIntegrand) {
  const Integrand f(parse("sin(x)*y^2 + y*z + exp(z)*x"));
  const Integrand g(parse("z^2*cos(y) - x*y"));
  const Integrand fg(f.f() + g.f());
  const Extremal y0(parse("0.3*x^2 - x"), 0, 2);
  const Grid grid(0, 2, 40);
  const auto rf = el_residual(f, y0, grid), rg = el_residual(g, y0, grid), rfg = el_residual(fg, y0, grid);
  for (std::size_t i = 0; i < rf.size(); ++i) EXPECT_NEAR(rfg[i], rf[i] + rg[i], 1e-12 * (1 + std::abs(rfg[i])));
}

TEST(ElResidual, SymbolicMatchesCentralDifference) {
  const Integrand f(parse("exp(x)*z^2 + sin(y)*z + x*y^3"));
  const Extremal y0(parse("cos(x)"), 0, 1);
  const Grid g(0, 1, 32);
  const auto sym = el_residual(f, y0, g, DerivativeMode::Symbolic);
  const auto fd = el_residual(f, y0, g, DerivativeMode::CentralDifference);
  for (std::size_t i = 0; i < sym.size(); ++i) EXPECT_NEAR(sym[i], fd[i], 1e-7 * (1 + std::abs(sym[i])));
}

TEST(LegendreProfile, Examples) {
  const Grid g(0, 1, 16);
  const auto osc = legendre_profile(Integrand(parse("z^2 - y^2")), Extremal::zero(0, 1), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(osc.p[i], 2.0);
    EXPECT_EQ(osc.q[i], -2.0);
  }
  EXPECT_EQ(osc.p_min, 2.0);
  EXPECT_EQ(osc.q_min, -2.0);

  const auto dir = legendre_profile(Integrand(parse("0.5*z^2")), Extremal::zero(0, 1), g);
  EXPECT_EQ(dir.p_min, 1.0);
  EXPECT_EQ(dir.q_min, 0.0);

  const auto hyp = legendre_profile(Integrand(parse("0.5*z^2 + 0.5*y^2")), Extremal::zero(0, 1), g);
  EXPECT_EQ(hyp.p_min, 1.0);
  EXPECT_EQ(hyp.q_min, 1.0);
}

TEST(LegendreProfile, TotalDerivativeFormAlongExtremal) {
  // f_yy = 2 x z and f_yz = 2 x y; along y0 = x^2:
  // q = 2 x (2 x) - (2 x^2 + 2 x (2 x)) = -2 x^2.
  const Integrand f(parse("x*y^2*z + z^2"));
  const Extremal y0(parse("x^2"), 0, 1);
  const Grid g(0, 1, 8);
  const auto prof = legendre_profile(f, y0, g);
  for (int i = 0; i <= g.n(); ++i) {
    const double x = g.x(i);
    EXPECT_NEAR(prof.q[static_cast<std::size_t>(i)], -2 * x * x, 1e-14);
    EXPECT_NEAR(prof.p[static_cast<std::size_t>(i)], 2.0, 1e-14);
  }
}

TEST(Decompose, Examples) {
  const auto d1 = decompose(Integrand(parse("0.5*z^2")));
  EXPECT_TRUE(d1.P.is_constant(0));
  EXPECT_TRUE(d1.Q.is_constant(0));
  EXPECT_TRUE(d1.R.is_constant(1));

  const auto d2 = decompose(Integrand(parse("y^2 + y*z + 0.5*z^2")));
  EXPECT_EQ(d2.P, parse("y^2"));
  EXPECT_EQ(d2.Q, y_var);
  EXPECT_TRUE(d2.R.is_constant(1));

  const auto d3 = decompose(Integrand(parse("sin(x)*y + (1-cos(x))*z + 0.5*z^2")));
  EXPECT_EQ(d3.P, parse("sin(x)*y"));
  EXPECT_EQ(d3.Q, parse("1-cos(x)"));
  EXPECT_TRUE(d3.R.is_constant(1));
}

TEST(Decompose, ReconstructsIntegrand) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1), uz(-10, 10);
  for (const char* text : {"exp(z)*y + x*z^3", "sin(x*z)*y^2 + cosh(y)", "z^2*cos(y) + sqrt(1+z^2)", "y*z/(1+x^2)"}) {
    const Integrand f(parse(text));
    const auto d = decompose(f);
    for (int k = 0; k < 200; ++k) {
      const double x = u(rng), y = u(rng), z = uz(rng);
      const double fv = f.f().eval(x, y, z);
      const double rec = d.P.eval(x, y, z) + d.Q.eval(x, y, z) * z + 0.5 * d.eval_R(x, y, z) * z * z;
      ASSERT_NEAR(rec, fv, 1e-9 * (1 + std::abs(fv))) << text << " at z=" << z;
    }
    for (double x : {-0.5, 0.2}) EXPECT_NEAR(d.eval_R(x, 0.3, 0.0), f.f_zz().eval(x, 0.3, 0.0), 1e-12) << text;
  }
}

TEST(Decompose, QuadraticInZHasConstantR) {
  const auto d = decompose(Integrand(parse("(2+sin(x))*z^2 + x*y*z + y^2")));
  EXPECT_FALSE(d.R.depends_on(Var::Z));
  for (double z : {-1.0, 0.5, 2.0}) EXPECT_NEAR(d.eval_R(0.4, 0.1, z), 2 * (2 + std::sin(0.4)), 1e-14);
}

TEST(Shift, Examples) {
  const Integrand f(parse("0.5*z^2"));
  const auto s = shift(f, Extremal(x_var, 0, 1));
  for (double z : {-2.0, 0.0, 1.5}) EXPECT_DOUBLE_EQ(s.f().eval(0.3, 0.1, z), 0.5 * (z + 1) * (z + 1));
  EXPECT_TRUE(shift(f, Extremal::zero(0, 1)).f().same_node(f.f()));
}

TEST(Shift, ProfileAndResidualAreEquivariant) {
  const Grid g(0, 3, 96);
  const Integrand f(parse("z^2 - y^2"));
  const Extremal y0(parse("sin(x)"), 0, 3);
  const auto at_y0 = legendre_profile(f, y0, g);
  const auto at_zero = legendre_profile(shift(f, y0), Extremal::zero(0, 3), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(at_y0.p[i], at_zero.p[i], 1e-12);
    EXPECT_NEAR(at_y0.q[i], at_zero.q[i], 1e-12);
  }
}

TEST(Shift, EquivarianceOnCorpus) {
  const auto corpus = sample_corpus(42, 12, 0.0, 0.6);
  const Grid g(0.0, 0.6, 128);
  for (const auto& inst : corpus) {
    // Residual and profile of a general (non-extremal) path must also agree.
    const Extremal path(parse("0.2*x - 0.1*x^3 + 0.05*sin(3*x)"), 0.0, 0.6);
    const auto& f = inst.built.f;
    const auto direct_r = el_residual(f, path, g);
    const auto shifted_r = el_residual(shift(f, path), Extremal::zero(0.0, 0.6), g);
    const auto direct_p = legendre_profile(f, path, g);
    const auto shifted_p = legendre_profile(shift(f, path), Extremal::zero(0.0, 0.6), g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ASSERT_NEAR(direct_r[i], shifted_r[i], 1e-10 * (1 + std::abs(direct_r[i]))) << f.f().str();
      ASSERT_NEAR(direct_p.p[i], shifted_p.p[i], 1e-10 * (1 + std::abs(direct_p.p[i])));
      ASSERT_NEAR(direct_p.q[i], shifted_p.q[i], 1e-10 * (1 + std::abs(direct_p.q[i])));
    }
  }
}

TEST(Extremal, RejectsYOrZ) {
  EXPECT_THROW(Extremal(parse("x*y"), 0, 1), std::invalid_argument);
  EXPECT_THROW(Extremal(parse("z"), 0, 1), std::invalid_argument);
  EXPECT_THROW(Extremal(parse("x"), 1, 1), std::invalid_argument);
}

TEST(Action, MatchesClosedForm) {
  const Grid g(0, 1, 64);
  std::vector<double> y(g.size()), yp(g.size());
  for (int i = 0; i <= g.n(); ++i) {
    y[static_cast<std::size_t>(i)] = g.x(i);
    yp[static_cast<std::size_t>(i)] = 1.0;
  }
  EXPECT_NEAR(action(Integrand(parse("0.5*z^2 + y^2")), SampledPath(g, y, yp)), 0.5 + 1.0 / 3.0, 1e-14);
}

TEST(CheckFinitePartials, ReportsDomainErrors) {
  const Grid g(0, 1, 8);
  EXPECT_THROW(check_finite_partials(Integrand(parse("z^2 + ln(x)")), Extremal::zero(0, 1), g), DomainError);
  EXPECT_NO_THROW(check_finite_partials(Integrand(parse("z^2 + ln(1+x)")), Extremal::zero(0, 1), g));
}
