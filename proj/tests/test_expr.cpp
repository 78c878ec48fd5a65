#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "support/random_tree.hpp"
#include "varcert/expr.hpp"
#include "varcert/table.hpp"

using namespace varcert;

TEST(Parse, PowerOfVariable) {
  const Expr e = parse("z^2");
  ASSERT_EQ(e.op(), Op::Pow);
  EXPECT_EQ(e.exponent(), 2);
  EXPECT_EQ(e.child(0).op(), Op::Variable);
  EXPECT_EQ(e.child(0).var(), Var::Z);
}

TEST(Parse, SumOfProducts) {
  const Expr e = parse("y*sin(x) + 0.5*z^2");
  ASSERT_EQ(e.op(), Op::Add);
  const Expr& lhs = e.child(0);
  const Expr& rhs = e.child(1);
  ASSERT_EQ(lhs.op(), Op::Mul);
  EXPECT_EQ(lhs.child(0), y_var);
  EXPECT_EQ(lhs.child(1).op(), Op::Sin);
  EXPECT_EQ(lhs.child(1).child(0), x_var);
  ASSERT_EQ(rhs.op(), Op::Mul);
  EXPECT_TRUE(rhs.child(0).is_constant(0.5));
  EXPECT_EQ(rhs.child(1), pow(z_var, 2));
}

TEST(Parse, ErrorsCarryOffsets) {
  auto offset_of = [](std::string_view text) -> std::size_t {
    try {
      parse(text);
    } catch (const ParseError& e) {
      EXPECT_LE(e.offset(), text.size());
      return e.offset();
    }
    ADD_FAILURE() << "no error for " << text;
    return 0;
  };
  EXPECT_EQ(offset_of("z^^2"), 2u);
  EXPECT_EQ(offset_of("z^1.5"), 2u);
  EXPECT_EQ(offset_of("foo(x)"), 0u);
  EXPECT_EQ(offset_of("(x+y"), 4u);
  EXPECT_EQ(offset_of("x+"), 2u);
  EXPECT_EQ(offset_of("x y"), 2u);
  EXPECT_EQ(offset_of(""), 0u);
  EXPECT_EQ(offset_of("sin x"), 4u);
}

TEST(Parse, SignedExponentsAndUnaryMinus) {
  EXPECT_DOUBLE_EQ(parse("x^-2").eval(2, 0, 0), 0.25);
  EXPECT_DOUBLE_EQ(parse("x^+3").eval(2, 0, 0), 8.0);
  EXPECT_DOUBLE_EQ(parse("-x^2").eval(3, 0, 0), -9.0);
  EXPECT_DOUBLE_EQ(parse("2*-y").eval(0, 4, 0), -8.0);
  EXPECT_DOUBLE_EQ(parse(" 1e-3 * z ").eval(0, 0, 2), 2e-3);
  EXPECT_DOUBLE_EQ(parse("x - y - z").eval(1, 2, 3), -4.0);
  EXPECT_DOUBLE_EQ(parse("x / y / z").eval(8, 2, 2), 2.0);
}

TEST(Parse, AllFunctionNames) {
  const double x = 0.7;
  EXPECT_DOUBLE_EQ(parse("sin(x)").eval(x, 0, 0), std::sin(x));
  EXPECT_DOUBLE_EQ(parse("cos(x)").eval(x, 0, 0), std::cos(x));
  EXPECT_DOUBLE_EQ(parse("tan(x)").eval(x, 0, 0), std::tan(x));
  EXPECT_DOUBLE_EQ(parse("exp(x)").eval(x, 0, 0), std::exp(x));
  EXPECT_DOUBLE_EQ(parse("ln(x)").eval(x, 0, 0), std::log(x));
  EXPECT_DOUBLE_EQ(parse("sqrt(x)").eval(x, 0, 0), std::sqrt(x));
  EXPECT_DOUBLE_EQ(parse("sinh(x)").eval(x, 0, 0), std::sinh(x));
  EXPECT_DOUBLE_EQ(parse("cosh(x)").eval(x, 0, 0), std::cosh(x));
}

TEST(Eval, Examples) {
  EXPECT_EQ(parse("z^2").eval(0, 0, 3), 9.0);
  EXPECT_NEAR(parse("sin(x)").eval(std::numbers::pi / 2, 0, 0), 1.0, 1e-15);
}

TEST(Eval, DomainErrorsNameTheNode) {
  auto op_of = [](std::string_view text, double x, double y, double z) {
    try {
      parse(text).eval(x, y, z);
    } catch (const DomainError& e) {
      return e.op();
    }
    return Op::Constant;
  };
  EXPECT_EQ(op_of("ln(y)", 0, -1, 0), Op::Ln);
  EXPECT_EQ(op_of("ln(y)", 0, 0, 0), Op::Ln);
  EXPECT_EQ(op_of("sqrt(y)", 0, -1, 0), Op::Sqrt);
  EXPECT_EQ(op_of("1/x", 0, 0, 0), Op::Div);
  EXPECT_EQ(op_of("x^-1", 0, 0, 0), Op::Pow);
  EXPECT_EQ(op_of("exp(exp(x))", 10, 0, 0), Op::Exp);
}

TEST(Diff, Examples) {
  EXPECT_EQ(diff(parse("z^2"), Var::Z), parse("2*z"));
  EXPECT_EQ(diff(parse("y*sin(x)"), Var::X), parse("y*cos(x)"));
}

TEST(Diff, SecondDerivativeOfQuadraticIsConstant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double p0 = 1.75, q0 = -0.625;
  const Expr f = Expr::constant(0.5 * p0) * pow(z_var, 2) - Expr::constant(0.5 * q0) * pow(y_var, 2);
  const Expr fzz = diff(diff(f, Var::Z), Var::Z);
  ASSERT_TRUE(fzz.is_constant());
  EXPECT_DOUBLE_EQ(fzz.value(), p0);

  const Expr fz = diff(f, Var::Z);
  const double h = 1e-5;
  for (int i = 0; i < 20; ++i) {
    const double x = u(rng), y = u(rng), z = u(rng);
    const double fd = (fz.eval(x, y, z + h) - fz.eval(x, y, z - h)) / (2 * h);
    EXPECT_NEAR(fd, p0, 1e-6 * std::abs(p0));
  }
}

TEST(Diff, RandomTreesAgreeWithCentralDifferences) {
  const auto res = fixtures::check_derivatives(2024, 300, 6);
  EXPECT_EQ(res.failures, 0) << "worst relative error " << res.worst;
  EXPECT_GT(res.trees_checked, res.trees / 2);
}

TEST(Diff, CacheIsPerThreadAndConsistent) {
  const Expr e = parse("sin(x*y)*exp(z) + ln(1 + x^2)");
  const Expr serial = diff(diff(e, Var::X), Var::Y);
  Expr threaded;
  std::thread t([&] { threaded = diff(diff(e, Var::X), Var::Y); });
  t.join();
  EXPECT_EQ(serial, threaded);
  clear_diff_cache();
  EXPECT_EQ(diff(diff(e, Var::X), Var::Y), serial);
}

TEST(Simplify, Examples) {
  EXPECT_EQ(simplify(parse("0*sin(x)+z")), z_var);
  EXPECT_EQ(simplify(parse("1*y^1")), y_var);
  const Expr five = simplify(parse("2+3"));
  ASSERT_TRUE(five.is_constant());
  EXPECT_EQ(five.value(), 5.0);
}

TEST(Simplify, PreservesValuesOnRandomTrees) {
  fixtures::TreeGen gen(77);
  int compared = 0;
  for (int t = 0; t < 200; ++t) {
    const Expr e = gen.tree(5);
    const Expr s = simplify(e);
    for (int k = 0; k < 100; ++k) {
      const double x = gen.uniform(-2, 2), y = gen.uniform(-2, 2), z = gen.uniform(-2, 2);
      if (!fixtures::well_conditioned(e, x, y, z)) continue;
      double a, b;
      try {
        a = e.eval(x, y, z);
        b = s.eval(x, y, z);
      } catch (const DomainError&) {
        continue;
      }
      ++compared;
      ASSERT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a))) << e.str() << "  vs  " << s.str();
    }
  }
  EXPECT_GT(compared, 5000);
}

TEST(Unparse, RoundTripsToEqualTrees) {
  for (const char* text : {"z^2", "y*sin(x) + 0.5*z^2", "-(x+y)^2", "x-(y-z)", "x/(y*z)", "(x/y)*z", "2^-1*x",
                           "-x^-3", "(-2)^3", "exp(-x)*cosh(y)/sqrt(1+z^2)", "1e-20*x", "x-(-y)", "-(-x)"}) {
    const Expr e = parse(text);
    EXPECT_EQ(parse(e.str()), e) << text << " -> " << e.str();
  }
  fixtures::TreeGen gen(5);
  for (int t = 0; t < 500; ++t) {
    const Expr e = gen.tree(6);
    ASSERT_EQ(parse(e.str()), e) << e.str();
  }
}

TEST(Substitute, ReplacesVariables) {
  const Expr e = parse("0.5*z^2 + y*x");
  const Expr s = substitute(e, Substitution{std::nullopt, y_var + 1.0, z_var + 1.0});
  EXPECT_DOUBLE_EQ(s.eval(2, 3, 4), 0.5 * 25 + 4 * 2);
}

TEST(Polynomial, CoefficientsInOneVariable) {
  const auto c = polynomial_coefficients(parse("3 + x*z + sin(x)*z^2"), Var::Z);
  ASSERT_TRUE(c);
  ASSERT_EQ(c->size(), 3u);
  EXPECT_DOUBLE_EQ((*c)[0].eval(1, 0, 0), 3.0);
  EXPECT_DOUBLE_EQ((*c)[1].eval(1.5, 0, 0), 1.5);
  EXPECT_DOUBLE_EQ((*c)[2].eval(1.5, 0, 0), std::sin(1.5));
  EXPECT_FALSE(polynomial_coefficients(parse("sin(z)"), Var::Z));
  EXPECT_FALSE(polynomial_coefficients(parse("z^3"), Var::Z, 2));
  EXPECT_FALSE(polynomial_coefficients(parse("1/z"), Var::Z));
}

TEST(Antiderivative, ClosedFormsDifferentiateBack) {
  for (const char* text : {"3*x^2 - 1", "sin(x)", "cos(2*x+1)", "exp(-x)", "2*sin(3*x) + x^3*y", "5"}) {
    const Expr e = parse(text);
    const auto F = antiderivative(e, Var::X);
    ASSERT_TRUE(F) << text;
    for (double x : {-1.0, 0.3, 2.0}) EXPECT_NEAR(diff(*F, Var::X).eval(x, 0.4, 0), e.eval(x, 0.4, 0), 1e-12) << text;
  }
  EXPECT_FALSE(antiderivative(parse("sin(x^2)"), Var::X));
  EXPECT_FALSE(antiderivative(parse("exp(x^2)"), Var::X));
}

TEST(Tabulated, ParsesWithPrimesAndDifferentiates) {
  std::vector<double> v, s;
  const int n = 64;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    v.push_back(t * t * t);
    s.push_back(3 * t * t);
  }
  TableSet tables{{"A", std::make_shared<const Table>("A", 0.0, 1.0, v, s)}};
  const Expr e = parse("A(x)*z", &tables);
  EXPECT_NEAR(e.eval(0.5, 0, 2), 0.25, 1e-14);
  EXPECT_NEAR(parse("A'(x)", &tables).eval(0.5, 0, 0), 0.75, 1e-14);
  EXPECT_NEAR(diff(e, Var::X).eval(0.5, 0, 2), 1.5, 1e-14);
  EXPECT_NEAR(parse("A''(x)", &tables).eval(0.25, 0, 0), 1.5, 1e-12);
  EXPECT_EQ(parse(e.str(), &tables), e);
  EXPECT_THROW(parse("A(x)"), ParseError);
}

TEST(Expr, ConstantsMustBeFinite) {
  EXPECT_THROW(Expr::constant(std::nan("")), std::invalid_argument);
  EXPECT_THROW(Expr::constant(INFINITY), std::invalid_argument);
}
