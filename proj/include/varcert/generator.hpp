#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varcert/calculus.hpp"
#include "varcert/expr.hpp"
#include "varcert/table.hpp"
#include "varcert/variational.hpp"

namespace varcert {

/// Ingredients of an integrand with a prescribed minimum:
///   f = P(x,y) + (C + A(x) + [qfun(x,y) - qfun(x,0)]) z
///       + 1/2 (pfun(x) + [rho(x,y,z) - rho(x,0,0)]) z^2,
///   A(x) = int_a^x P_y(t, 0) dt,
/// which has y = 0 as an extremal with f_zz = pfun along it. With y0 set, the
/// integrand is moved to y0 by y -> y - y0(x), z -> z - y0'(x).
struct GeneratorSpec {
  Expr P;
  Expr qfun;
  Expr pfun = Expr::constant(1.0);
  Expr rho;
  double C = 0.0;
  double a = 0.0;
  double b = 1.0;
  std::optional<Expr> y0;
};

enum class AntiderivativePath { Symbolic, Table };
std::string_view to_string(AntiderivativePath path);

inline constexpr int kDefaultTableN = 2048;

/// A(x) on a uniform grid: cumulative Simpson per cell, slopes P_y(x_i, 0).
struct AntiderivativeTable {
  Grid grid;
  std::vector<double> values;
  std::vector<double> slopes;
};

struct BuiltIntegrand {
  Integrand f;
  Expr antiderivative;  // A(x), closed form or a reference to `table`
  AntiderivativePath path;
  std::shared_ptr<const Table> table;  // set on the Table path
  std::vector<std::string> warnings;
};

AntiderivativeTable tabulate_antiderivative(const Expr& P_y0, double a, double b, int n = kDefaultTableN);

/// Throws std::invalid_argument if an ingredient depends on variables it may
/// not, and LegendreViolation if pfun <= 0 on the generation grid.
BuiltIntegrand build_zero(const GeneratorSpec& spec, int table_n = kDefaultTableN);

/// build_zero followed by the shift to spec.y0; equals build_zero when y0 is
/// absent or identically zero.
BuiltIntegrand build_shifted(const GeneratorSpec& spec, int table_n = kDefaultTableN);

/// The designated extremal of a spec (zero when y0 is absent).
Extremal designated_extremal(const GeneratorSpec& spec);

/// True when f is a polynomial of total degree <= 2 in (y, z).
bool is_quadratic_in_yz(const Expr& f);

struct CorpusInstance {
  std::size_t index;
  GeneratorSpec spec;
  BuiltIntegrand built;
  Extremal y0;
  bool quadratic;
  int attempts;  // draws needed before the length criterion certified
};

/// Draws instances from fixed families and keeps those certifying at n = 512:
///   P     = sum_{i+j<=d} c_ij x^i y^j, d uniform in {2, 3},
///           c_ij uniform on a 1e-3 lattice in [-2, 2]
///   qfun  in {0, x*y, sin(x)*y^2}
///   pfun  in {1, 2+sin(x), 1+x^2}
///   rho   in {0, y*z, 0.1*sin(y)*z}
///   C     in {-1, 0, 1}
///   y0    in {0, sin(x), x*(b-x)}
/// Deterministic in `seed`. Throws std::invalid_argument if count < 1.
std::vector<CorpusInstance> sample_corpus(std::uint64_t seed, int count, double a, double b);

}  // namespace varcert
