#include <cmath>
#include <unordered_map>

#include "varcert/expr.hpp"
#include "varcert/table.hpp"

namespace varcert {

namespace {

std::optional<double> fold(const Expr& raw) {
  try {
    return raw.eval(0.0, 0.0, 0.0);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

Expr s_neg(const Expr& a);
Expr s_add(const Expr& a, const Expr& b);
Expr s_sub(const Expr& a, const Expr& b);
Expr s_mul(const Expr& a, const Expr& b);
Expr s_div(const Expr& a, const Expr& b);
Expr s_pow(const Expr& a, int n);

bool is_negative_constant(const Expr& e) { return e.is_constant() && e.value() < 0.0; }

Expr s_neg(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.op() == Op::Neg) return a.child(0);
  if (a.op() == Op::Sub) return Expr::binary(Op::Sub, a.child(1), a.child(0));
  if (a.op() == Op::Mul && a.child(0).is_constant()) return s_mul(Expr::constant(-a.child(0).value()), a.child(1));
  return Expr::unary(Op::Neg, a);
}

Expr s_add(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant())
    if (auto v = fold(Expr::binary(Op::Add, a, b))) return Expr::constant(*v);
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  if (b.op() == Op::Neg) return s_sub(a, b.child(0));
  if (is_negative_constant(b)) return s_sub(a, Expr::constant(-b.value()));
  if (a.op() == Op::Neg) return s_sub(b, a.child(0));
  if (a == b) return s_mul(Expr::constant(2.0), a);
  return Expr::binary(Op::Add, a, b);
}

Expr s_sub(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant())
    if (auto v = fold(Expr::binary(Op::Sub, a, b))) return Expr::constant(*v);
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return s_neg(b);
  if (a == b) return Expr();
  if (b.op() == Op::Neg) return s_add(a, b.child(0));
  if (is_negative_constant(b)) return s_add(a, Expr::constant(-b.value()));
  return Expr::binary(Op::Sub, a, b);
}

Expr s_mul(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant())
    if (auto v = fold(Expr::binary(Op::Mul, a, b))) return Expr::constant(*v);
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr();
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return s_neg(b);
  if (b.is_constant(-1.0)) return s_neg(a);
  if (b.is_constant() && !a.is_constant()) return s_mul(b, a);
  if (a.op() == Op::Neg) return s_neg(s_mul(a.child(0), b));
  if (b.op() == Op::Neg) return s_neg(s_mul(a, b.child(0)));
  if (a.is_constant() && b.op() == Op::Mul && b.child(0).is_constant())
    return s_mul(s_mul(a, b.child(0)), b.child(1));
  if (a.is_constant() && b.op() == Op::Div && b.child(0).is_constant())
    return s_div(s_mul(a, b.child(0)), b.child(1));
  if (a == b) return s_pow(a, 2);
  if (a.op() == Op::Pow && a.child(0) == b) return s_pow(b, a.exponent() + 1);
  if (b.op() == Op::Pow && b.child(0) == a) return s_pow(a, b.exponent() + 1);
  if (a.op() == Op::Pow && b.op() == Op::Pow && a.child(0) == b.child(0))
    return s_pow(a.child(0), a.exponent() + b.exponent());
  return Expr::binary(Op::Mul, a, b);
}

Expr s_div(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant())
    if (auto v = fold(Expr::binary(Op::Div, a, b))) return Expr::constant(*v);
  if (b.is_constant(0.0)) return Expr::binary(Op::Div, a, b);
  if (a.is_constant(0.0)) return Expr();
  if (b.is_constant(1.0)) return a;
  if (b.is_constant(-1.0)) return s_neg(a);
  if (a == b) return Expr::constant(1.0);
  if (a.op() == Op::Neg) return s_neg(s_div(a.child(0), b));
  if (b.op() == Op::Neg) return s_neg(s_div(a, b.child(0)));
  return Expr::binary(Op::Div, a, b);
}

Expr s_pow(const Expr& a, int n) {
  if (n == 0) return Expr::constant(1.0);
  if (n == 1) return a;
  if (a.is_constant())
    if (auto v = fold(Expr::power(a, n))) return Expr::constant(*v);
  if (a.op() == Op::Pow) {
    const long long m = static_cast<long long>(a.exponent()) * n;
    if (m >= -1000000 && m <= 1000000) return s_pow(a.child(0), static_cast<int>(m));
  }
  if (a.op() == Op::Neg) {
    Expr inner = s_pow(a.child(0), n);
    return n % 2 == 0 ? inner : s_neg(inner);
  }
  return Expr::power(a, n);
}

Expr s_unary(Op op, const Expr& a) {
  if (op == Op::Neg) return s_neg(a);
  Expr raw = Expr::unary(op, a);
  if (a.is_constant())
    if (auto v = fold(raw)) return Expr::constant(*v);
  return raw;
}

Expr s_tab(const std::shared_ptr<const Table>& table, int order, const Expr& a) {
  if (order >= 4) return Expr();
  Expr raw = Expr::tabulated(table, order, a);
  if (a.is_constant())
    if (auto v = fold(raw)) return Expr::constant(*v);
  return raw;
}

Expr rebuild(const Expr& e, std::unordered_map<const void*, Expr>& memo) {
  if (e.arity() == 0) return e;
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  Expr out;
  switch (e.op()) {
    case Op::Add: out = s_add(rebuild(e.child(0), memo), rebuild(e.child(1), memo)); break;
    case Op::Sub: out = s_sub(rebuild(e.child(0), memo), rebuild(e.child(1), memo)); break;
    case Op::Mul: out = s_mul(rebuild(e.child(0), memo), rebuild(e.child(1), memo)); break;
    case Op::Div: out = s_div(rebuild(e.child(0), memo), rebuild(e.child(1), memo)); break;
    case Op::Pow: out = s_pow(rebuild(e.child(0), memo), e.exponent()); break;
    case Op::Tabulated: out = s_tab(e.table(), e.table_order(), rebuild(e.child(0), memo)); break;
    default: out = s_unary(e.op(), rebuild(e.child(0), memo)); break;
  }
  memo.emplace(e.id(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Differentiation

struct DiffKey {
  Expr e;
  Var v;
  bool operator==(const DiffKey& o) const { return v == o.v && e == o.e; }
};

struct DiffKeyHash {
  std::size_t operator()(const DiffKey& k) const noexcept { return k.e.hash() * 3 + static_cast<std::size_t>(k.v); }
};

using DiffCache = std::unordered_map<DiffKey, Expr, DiffKeyHash>;

DiffCache& diff_cache() {
  thread_local DiffCache cache;
  return cache;
}

constexpr std::size_t kDiffCacheLimit = 200000;

Expr diff_rec(const Expr& e, Var v) {
  if (!e.depends_on(v)) return Expr();
  auto& cache = diff_cache();
  if (auto it = cache.find(DiffKey{e, v}); it != cache.end()) return it->second;

  Expr d;
  switch (e.op()) {
    case Op::Constant: d = Expr(); break;
    case Op::Variable: d = Expr::constant(e.var() == v ? 1.0 : 0.0); break;
    case Op::Neg: d = s_neg(diff_rec(e.child(0), v)); break;
    case Op::Add: d = s_add(diff_rec(e.child(0), v), diff_rec(e.child(1), v)); break;
    case Op::Sub: d = s_sub(diff_rec(e.child(0), v), diff_rec(e.child(1), v)); break;
    case Op::Mul: {
      const Expr& a = e.child(0);
      const Expr& b = e.child(1);
      d = s_add(s_mul(diff_rec(a, v), b), s_mul(a, diff_rec(b, v)));
      break;
    }
    case Op::Div: {
      const Expr& a = e.child(0);
      const Expr& b = e.child(1);
      if (!b.depends_on(v)) {
        d = s_div(diff_rec(a, v), b);
      } else {
        d = s_div(s_sub(s_mul(diff_rec(a, v), b), s_mul(a, diff_rec(b, v))), s_pow(b, 2));
      }
      break;
    }
    case Op::Pow: {
      const int n = e.exponent();
      const Expr& u = e.child(0);
      d = s_mul(s_mul(Expr::constant(n), s_pow(u, n - 1)), diff_rec(u, v));
      break;
    }
    default: {
      const Expr& u = e.child(0);
      const Expr du = diff_rec(u, v);
      Expr outer;
      switch (e.op()) {
        case Op::Sin: outer = s_unary(Op::Cos, u); break;
        case Op::Cos: outer = s_neg(s_unary(Op::Sin, u)); break;
        case Op::Tan: outer = s_pow(s_unary(Op::Cos, u), -2); break;
        case Op::Exp: outer = e; break;
        case Op::Ln: outer = s_pow(u, -1); break;
        case Op::Sqrt: outer = s_div(Expr::constant(0.5), e); break;
        case Op::Sinh: outer = s_unary(Op::Cosh, u); break;
        case Op::Cosh: outer = s_unary(Op::Sinh, u); break;
        case Op::Tabulated: outer = s_tab(e.table(), e.table_order() + 1, u); break;
        default: throw std::logic_error("diff: unhandled operator");
      }
      d = s_mul(outer, du);
      break;
    }
  }
  if (cache.size() > kDiffCacheLimit) cache.clear();
  cache.emplace(DiffKey{e, v}, d);
  return d;
}

Expr substitute_rec(const Expr& e, const Substitution& s, std::unordered_map<const void*, Expr>& memo) {
  if (e.op() == Op::Variable) {
    const auto& slot = e.var() == Var::X ? s.x : (e.var() == Var::Y ? s.y : s.z);
    return slot ? *slot : e;
  }
  if (e.arity() == 0) return e;
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  Expr out;
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      out = Expr::binary(e.op(), substitute_rec(e.child(0), s, memo), substitute_rec(e.child(1), s, memo));
      break;
    case Op::Pow: out = Expr::power(substitute_rec(e.child(0), s, memo), e.exponent()); break;
    case Op::Tabulated: out = Expr::tabulated(e.table(), e.table_order(), substitute_rec(e.child(0), s, memo)); break;
    default: out = Expr::unary(e.op(), substitute_rec(e.child(0), s, memo)); break;
  }
  memo.emplace(e.id(), out);
  return out;
}

using Coeffs = std::vector<Expr>;

void trim(Coeffs& c) {
  while (c.size() > 1 && c.back().is_constant(0.0)) c.pop_back();
}

std::optional<Coeffs> poly_rec(const Expr& e, Var v, int max_degree) {
  if (!e.depends_on(v)) return Coeffs{e};
  switch (e.op()) {
    case Op::Variable: return Coeffs{Expr(), Expr::constant(1.0)};
    case Op::Neg: {
      auto c = poly_rec(e.child(0), v, max_degree);
      if (!c) return std::nullopt;
      for (auto& t : *c) t = s_neg(t);
      return c;
    }
    case Op::Add:
    case Op::Sub: {
      auto a = poly_rec(e.child(0), v, max_degree);
      auto b = poly_rec(e.child(1), v, max_degree);
      if (!a || !b) return std::nullopt;
      Coeffs out(std::max(a->size(), b->size()));
      for (std::size_t k = 0; k < out.size(); ++k) {
        Expr lhs = k < a->size() ? (*a)[k] : Expr();
        Expr rhs = k < b->size() ? (*b)[k] : Expr();
        out[k] = e.op() == Op::Add ? s_add(lhs, rhs) : s_sub(lhs, rhs);
      }
      trim(out);
      return out;
    }
    case Op::Mul: {
      auto a = poly_rec(e.child(0), v, max_degree);
      auto b = poly_rec(e.child(1), v, max_degree);
      if (!a || !b) return std::nullopt;
      if (static_cast<int>(a->size() + b->size()) - 2 > max_degree) return std::nullopt;
      Coeffs out(a->size() + b->size() - 1);
      for (std::size_t i = 0; i < a->size(); ++i)
        for (std::size_t j = 0; j < b->size(); ++j) out[i + j] = s_add(out[i + j], s_mul((*a)[i], (*b)[j]));
      trim(out);
      return out;
    }
    case Op::Div: {
      if (e.child(1).depends_on(v)) return std::nullopt;
      auto a = poly_rec(e.child(0), v, max_degree);
      if (!a) return std::nullopt;
      for (auto& t : *a) t = s_div(t, e.child(1));
      return a;
    }
    case Op::Pow: {
      const int n = e.exponent();
      if (n < 0) return std::nullopt;
      auto base = poly_rec(e.child(0), v, max_degree);
      if (!base) return std::nullopt;
      Coeffs out{Expr::constant(1.0)};
      for (int k = 0; k < n; ++k) {
        if (static_cast<int>(out.size() + base->size()) - 2 > max_degree) return std::nullopt;
        Coeffs next(out.size() + base->size() - 1);
        for (std::size_t i = 0; i < out.size(); ++i)
          for (std::size_t j = 0; j < base->size(); ++j) next[i + j] = s_add(next[i + j], s_mul(out[i], (*base)[j]));
        out = std::move(next);
        trim(out);
      }
      return out;
    }
    default: return std::nullopt;
  }
}

// Linear argument alpha*v + beta with alpha a nonzero numeric constant.
std::optional<double> linear_slope(const Expr& u, Var v) {
  auto c = poly_rec(u, v, 1);
  if (!c || c->size() != 2) return std::nullopt;
  Expr slope = simplify((*c)[1]);
  if (!slope.is_constant() || slope.value() == 0.0) return std::nullopt;
  return slope.value();
}

}  // namespace

Expr simplify(const Expr& e) {
  Expr current = e;
  for (int pass = 0; pass < 6; ++pass) {
    std::unordered_map<const void*, Expr> memo;
    Expr next = rebuild(current, memo);
    if (next == current) return next;
    current = next;
  }
  return current;
}

Expr diff(const Expr& e, Var v) { return simplify(diff_rec(e, v)); }

void clear_diff_cache() { diff_cache().clear(); }

Expr substitute(const Expr& e, const Substitution& s) {
  std::unordered_map<const void*, Expr> memo;
  return simplify(substitute_rec(e, s, memo));
}

std::optional<std::vector<Expr>> polynomial_coefficients(const Expr& e, Var v, int max_degree) {
  auto c = poly_rec(e, v, max_degree);
  if (!c) return std::nullopt;
  for (auto& t : *c) t = simplify(t);
  trim(*c);
  if (static_cast<int>(c->size()) - 1 > max_degree) return std::nullopt;
  return c;
}

std::optional<Expr> antiderivative(const Expr& e, Var v) {
  const Expr var = Expr::variable(v);
  if (!e.depends_on(v)) return simplify(s_mul(e, var));
  if (auto c = polynomial_coefficients(e, v, 32)) {
    Expr out;
    for (std::size_t k = 0; k < c->size(); ++k) {
      const double inv = 1.0 / static_cast<double>(k + 1);
      out = s_add(out, s_mul(s_mul(Expr::constant(inv), (*c)[k]), s_pow(var, static_cast<int>(k + 1))));
    }
    return simplify(out);
  }
  switch (e.op()) {
    case Op::Add:
    case Op::Sub: {
      auto a = antiderivative(e.child(0), v);
      auto b = antiderivative(e.child(1), v);
      if (!a || !b) return std::nullopt;
      return simplify(e.op() == Op::Add ? s_add(*a, *b) : s_sub(*a, *b));
    }
    case Op::Neg: {
      auto a = antiderivative(e.child(0), v);
      if (!a) return std::nullopt;
      return simplify(s_neg(*a));
    }
    case Op::Mul: {
      if (!e.child(0).depends_on(v)) {
        auto b = antiderivative(e.child(1), v);
        if (b) return simplify(s_mul(e.child(0), *b));
      } else if (!e.child(1).depends_on(v)) {
        auto a = antiderivative(e.child(0), v);
        if (a) return simplify(s_mul(e.child(1), *a));
      }
      return std::nullopt;
    }
    case Op::Div: {
      if (e.child(1).depends_on(v)) return std::nullopt;
      auto a = antiderivative(e.child(0), v);
      if (!a) return std::nullopt;
      return simplify(s_div(*a, e.child(1)));
    }
    case Op::Sin:
    case Op::Cos:
    case Op::Exp: {
      const Expr& u = e.child(0);
      auto alpha = linear_slope(u, v);
      if (!alpha) return std::nullopt;
      const Expr inv = Expr::constant(1.0 / *alpha);
      if (e.op() == Op::Sin) return simplify(s_neg(s_mul(inv, s_unary(Op::Cos, u))));
      if (e.op() == Op::Cos) return simplify(s_mul(inv, s_unary(Op::Sin, u)));
      return simplify(s_mul(inv, e));
    }
    default: return std::nullopt;
  }
}

}  // namespace varcert
