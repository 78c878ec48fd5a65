#include "varcert/expr.hpp"

#include <charconv>
#include <cmath>
#include <functional>

#include "varcert/table.hpp"

namespace varcert {

struct Expr::Node {
  Op op = Op::Constant;
  double value = 0.0;
  Var var = Var::X;
  int exponent = 0;  // Pow exponent, or derivative order for Tabulated
  std::shared_ptr<const Table> table;
  std::vector<Expr> kids;
  std::size_t hash = 0;
  std::size_t count = 1;
  std::uint8_t vars = 0;
  bool tables = false;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

bool is_unary(Op op) { return op >= Op::Neg && op <= Op::Tabulated; }
bool is_binary(Op op) { return op >= Op::Add && op <= Op::Div; }

}  // namespace

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Constant: return "constant";
    case Op::Variable: return "variable";
    case Op::Neg: return "neg";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Exp: return "exp";
    case Op::Ln: return "ln";
    case Op::Sqrt: return "sqrt";
    case Op::Sinh: return "sinh";
    case Op::Cosh: return "cosh";
    case Op::Tabulated: return "table";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Pow: return "pow";
  }
  return "?";
}

char var_name(Var v) {
  switch (v) {
    case Var::X: return 'x';
    case Var::Y: return 'y';
    case Var::Z: return 'z';
  }
  return '?';
}

DomainError::DomainError(Op op, const std::string& what)
    : std::runtime_error(std::string(op_name(op)) + ": " + what), op_(op) {}

ParseError::ParseError(std::size_t offset, std::string expected)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": expected " + expected),
      offset_(offset),
      expected_(std::move(expected)) {}

Expr::Expr() {
  static const auto zero = std::make_shared<const Node>();
  node_ = zero;
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("constant must be finite");
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = value == 0.0 ? 0.0 : value;  // fold -0.0
  n->hash = mix(std::hash<double>{}(n->value), 0x11);
  return Expr(std::move(n));
}

Expr Expr::variable(Var v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Variable;
  n->var = v;
  n->vars = static_cast<std::uint8_t>(1u << static_cast<unsigned>(v));
  n->hash = mix(0x22, static_cast<std::size_t>(v));
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
  if (!is_unary(op) || op == Op::Tabulated) throw std::invalid_argument("not a unary operator");
  if (op == Op::Neg && arg.is_constant()) return constant(-arg.value());
  auto n = std::make_shared<Node>();
  n->op = op;
  n->hash = mix(mix(0x33, static_cast<std::size_t>(op)), arg.hash());
  n->count = 1 + arg.node_count();
  n->vars = arg.node_->vars;
  n->tables = arg.node_->tables;
  n->kids.push_back(std::move(arg));
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (!is_binary(op)) throw std::invalid_argument("not a binary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->hash = mix(mix(mix(0x44, static_cast<std::size_t>(op)), lhs.hash()), rhs.hash());
  n->count = 1 + lhs.node_count() + rhs.node_count();
  n->vars = lhs.node_->vars | rhs.node_->vars;
  n->tables = lhs.node_->tables || rhs.node_->tables;
  n->kids.push_back(std::move(lhs));
  n->kids.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->exponent = exponent;
  n->hash = mix(mix(0x55, static_cast<std::size_t>(static_cast<unsigned>(exponent))), base.hash());
  n->count = 1 + base.node_count();
  n->vars = base.node_->vars;
  n->tables = base.node_->tables;
  n->kids.push_back(std::move(base));
  return Expr(std::move(n));
}

Expr Expr::tabulated(std::shared_ptr<const Table> table, int order, Expr arg) {
  if (!table) throw std::invalid_argument("null table");
  if (order < 0) throw std::invalid_argument("negative table derivative order");
  auto n = std::make_shared<Node>();
  n->op = Op::Tabulated;
  n->exponent = order;
  n->hash = mix(mix(mix(0x66, std::hash<const void*>{}(table.get())), static_cast<std::size_t>(order)), arg.hash());
  n->table = std::move(table);
  n->count = 1 + arg.node_count();
  n->vars = arg.node_->vars;
  n->tables = true;
  n->kids.push_back(std::move(arg));
  return Expr(std::move(n));
}

Op Expr::op() const noexcept { return node_->op; }

double Expr::value() const {
  if (node_->op != Op::Constant) throw std::logic_error("value() on non-constant");
  return node_->value;
}

Var Expr::var() const {
  if (node_->op != Op::Variable) throw std::logic_error("var() on non-variable");
  return node_->var;
}

int Expr::exponent() const {
  if (node_->op != Op::Pow) throw std::logic_error("exponent() on non-power");
  return node_->exponent;
}

int Expr::table_order() const {
  if (node_->op != Op::Tabulated) throw std::logic_error("table_order() on non-table");
  return node_->exponent;
}

const std::shared_ptr<const Table>& Expr::table() const { return node_->table; }

std::size_t Expr::arity() const noexcept { return node_->kids.size(); }
const Expr& Expr::child(std::size_t i) const { return node_->kids.at(i); }
std::size_t Expr::hash() const noexcept { return node_->hash; }
std::size_t Expr::node_count() const noexcept { return node_->count; }

bool Expr::depends_on(Var v) const noexcept {
  return (node_->vars >> static_cast<unsigned>(v)) & 1u;
}

bool Expr::is_constant(double v) const noexcept { return node_->op == Op::Constant && node_->value == v; }
bool Expr::uses_tables() const noexcept { return node_->tables; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& n = *a.node_;
  const auto& m = *b.node_;
  if (n.hash != m.hash || n.op != m.op || n.count != m.count) return false;
  switch (n.op) {
    case Op::Constant: return n.value == m.value;
    case Op::Variable: return n.var == m.var;
    case Op::Pow:
      if (n.exponent != m.exponent) return false;
      break;
    case Op::Tabulated:
      if (n.exponent != m.exponent || n.table != m.table) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < n.kids.size(); ++i)
    if (!(n.kids[i] == m.kids[i])) return false;
  return true;
}

double Expr::eval(double x, double y, double z) const {
  const Node& n = *node_;
  double r = 0.0;
  switch (n.op) {
    case Op::Constant: return n.value;
    case Op::Variable: return n.var == Var::X ? x : (n.var == Var::Y ? y : z);
    case Op::Neg: return -n.kids[0].eval(x, y, z);
    case Op::Sin: r = std::sin(n.kids[0].eval(x, y, z)); break;
    case Op::Cos: r = std::cos(n.kids[0].eval(x, y, z)); break;
    case Op::Tan: r = std::tan(n.kids[0].eval(x, y, z)); break;
    case Op::Exp: r = std::exp(n.kids[0].eval(x, y, z)); break;
    case Op::Ln: {
      const double a = n.kids[0].eval(x, y, z);
      if (!(a > 0.0)) throw DomainError(n.op, "logarithm of non-positive value");
      r = std::log(a);
      break;
    }
    case Op::Sqrt: {
      const double a = n.kids[0].eval(x, y, z);
      if (a < 0.0) throw DomainError(n.op, "square root of negative value");
      r = std::sqrt(a);
      break;
    }
    case Op::Sinh: r = std::sinh(n.kids[0].eval(x, y, z)); break;
    case Op::Cosh: r = std::cosh(n.kids[0].eval(x, y, z)); break;
    case Op::Tabulated: r = n.table->eval(n.kids[0].eval(x, y, z), n.exponent); break;
    case Op::Add: r = n.kids[0].eval(x, y, z) + n.kids[1].eval(x, y, z); break;
    case Op::Sub: r = n.kids[0].eval(x, y, z) - n.kids[1].eval(x, y, z); break;
    case Op::Mul: r = n.kids[0].eval(x, y, z) * n.kids[1].eval(x, y, z); break;
    case Op::Div: {
      const double num = n.kids[0].eval(x, y, z);
      const double den = n.kids[1].eval(x, y, z);
      if (den == 0.0) throw DomainError(n.op, "division by zero");
      r = num / den;
      break;
    }
    case Op::Pow: {
      const double base = n.kids[0].eval(x, y, z);
      if (base == 0.0 && n.exponent < 0) throw DomainError(n.op, "zero raised to a negative power");
      r = std::pow(base, n.exponent);
      break;
    }
  }
  if (!std::isfinite(r)) throw DomainError(n.op, "non-finite result");
  return r;
}

// ---------------------------------------------------------------------------
// Unparsing

namespace {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool is_atom(const Expr& e) {
  switch (e.op()) {
    case Op::Constant: return e.value() >= 0.0;
    case Op::Variable:
    case Op::Sin:
    case Op::Cos:
    case Op::Tan:
    case Op::Exp:
    case Op::Ln:
    case Op::Sqrt:
    case Op::Sinh:
    case Op::Cosh:
    case Op::Tabulated: return true;
    default: return false;
  }
}

bool is_negative_lead(const Expr& e) {
  return e.op() == Op::Neg || (e.op() == Op::Constant && e.value() < 0.0);
}

void unparse(const Expr& e, std::string& out);

void unparse_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  unparse(e, out);
  if (wrap) out += ')';
}

void unparse(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::Constant: out += format_number(e.value()); return;
    case Op::Variable: out += var_name(e.var()); return;
    case Op::Neg: {
      const Expr& a = e.child(0);
      out += '-';
      unparse_wrapped(a, !(is_atom(a) || a.op() == Op::Pow), out);
      return;
    }
    case Op::Tabulated:
      out += e.table()->name();
      out.append(static_cast<std::size_t>(e.table_order()), '\'');
      unparse_wrapped(e.child(0), true, out);
      return;
    case Op::Add:
    case Op::Sub: {
      unparse(e.child(0), out);
      out += e.op() == Op::Add ? '+' : '-';
      const Expr& b = e.child(1);
      unparse_wrapped(b, b.op() == Op::Add || b.op() == Op::Sub || is_negative_lead(b), out);
      return;
    }
    case Op::Mul:
    case Op::Div: {
      const Expr& a = e.child(0);
      unparse_wrapped(a, a.op() == Op::Add || a.op() == Op::Sub, out);
      out += e.op() == Op::Mul ? '*' : '/';
      const Expr& b = e.child(1);
      unparse_wrapped(b, !(is_atom(b) || b.op() == Op::Pow), out);
      return;
    }
    case Op::Pow:
      unparse_wrapped(e.child(0), !is_atom(e.child(0)), out);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    default:
      out += op_name(e.op());
      unparse_wrapped(e.child(0), true, out);
      return;
  }
}

}  // namespace

std::string Expr::str() const {
  std::string out;
  unparse(*this, out);
  return out;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Op::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(Op::Neg, a); }
Expr pow(const Expr& base, int exponent) { return Expr::power(base, exponent); }
Expr sin(const Expr& a) { return Expr::unary(Op::Sin, a); }
Expr cos(const Expr& a) { return Expr::unary(Op::Cos, a); }
Expr exp(const Expr& a) { return Expr::unary(Op::Exp, a); }

}  // namespace varcert
