#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace varcert {

/// Independent variable slots of an integrand f(x, y, z), z standing for y'.
enum class Var : std::uint8_t { X = 0, Y = 1, Z = 2 };

enum class Op : std::uint8_t {
  Constant,
  Variable,
  // unary
  Neg,
  Sin,
  Cos,
  Tan,
  Exp,
  Ln,
  Sqrt,
  Sinh,
  Cosh,
  Tabulated,
  // binary
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

std::string_view op_name(Op op);
char var_name(Var v);

class Table;

/// Raised by Expr::eval when a node leaves its real domain (ln of a
/// non-positive number, division by zero, sqrt of a negative, overflow).
class DomainError : public std::runtime_error {
 public:
  DomainError(Op op, const std::string& what);
  Op op() const noexcept { return op_; }

 private:
  Op op_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string expected);
  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Immutable expression tree over (x, y, z).
///
/// Nodes are shared and never mutated after construction, so copies are
/// cheap and an Expr can be read from several threads at once. Equality is
/// structural. Pow carries a literal integer exponent; Tabulated applies the
/// k-th derivative of a tabulated cubic to its argument.
class Expr {
 public:
  Expr();  // constant 0

  static Expr constant(double value);
  static Expr variable(Var v);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr power(Expr base, int exponent);
  static Expr tabulated(std::shared_ptr<const Table> table, int order, Expr arg);

  Op op() const noexcept;
  double value() const;
  Var var() const;
  int exponent() const;
  int table_order() const;
  const std::shared_ptr<const Table>& table() const;

  std::size_t arity() const noexcept;
  const Expr& child(std::size_t i) const;

  std::size_t hash() const noexcept;
  std::size_t node_count() const noexcept;
  bool depends_on(Var v) const noexcept;
  bool is_constant() const noexcept { return op() == Op::Constant; }
  bool is_constant(double v) const noexcept;
  bool uses_tables() const noexcept;

  /// Throws DomainError on the first offending node.
  double eval(double x, double y, double z) const;

  /// Text in the parse grammar; parse(str()) yields a structurally equal tree.
  std::string str() const;

  bool same_node(const Expr& other) const noexcept { return node_ == other.node_; }
  const void* id() const noexcept { return node_.get(); }
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
inline Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
inline Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
inline Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
inline Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
inline Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
inline Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }
Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);

inline const Expr x_var = Expr::variable(Var::X);
inline const Expr y_var = Expr::variable(Var::Y);
inline const Expr z_var = Expr::variable(Var::Z);

struct ExprHash {
  std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

/// Named tabulated functions a parser may resolve, e.g. "A(x)".
using TableSet = std::map<std::string, std::shared_ptr<const Table>, std::less<>>;

/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' signed-integer)?
///   atom   := number | x | y | z | fname '(' expr ')' | '(' expr ')' | '-' factor
/// Table names from `tables` are accepted as fname, optionally followed by
/// primes selecting a derivative order (A'(x)).
Expr parse(std::string_view text, const TableSet* tables = nullptr);

/// Exact symbolic partial derivative, simplified. Results are memoised per
/// thread by structural identity of (e, v).
Expr diff(const Expr& e, Var v);
void clear_diff_cache();

/// Constant folding plus 0/1 identities; value-preserving wherever the
/// input evaluates without a domain error.
Expr simplify(const Expr& e);

/// Simultaneous replacement of variables; the result is simplified.
struct Substitution {
  std::optional<Expr> x, y, z;
};
Expr substitute(const Expr& e, const Substitution& s);

/// Coefficients c_k (free of v) with e == sum_k c_k v^k, or nullopt when e is
/// not a polynomial in v of degree <= max_degree.
std::optional<std::vector<Expr>> polynomial_coefficients(const Expr& e, Var v, int max_degree = 8);

/// Antiderivative in v for polynomials and sin/cos/exp of linear arguments;
/// nullopt outside that table.
std::optional<Expr> antiderivative(const Expr& e, Var v);

}  // namespace varcert
