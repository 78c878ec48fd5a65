#include <cctype>
#include <charconv>
#include <cmath>

#include "varcert/expr.hpp"

namespace varcert {

namespace {

struct FunctionName {
  std::string_view name;
  Op op;
};

constexpr FunctionName kFunctions[] = {
    {"sin", Op::Sin},   {"cos", Op::Cos},   {"tan", Op::Tan},   {"exp", Op::Exp},
    {"ln", Op::Ln},     {"sqrt", Op::Sqrt}, {"sinh", Op::Sinh}, {"cosh", Op::Cosh},
};

class Parser {
 public:
  Parser(std::string_view text, const TableSet* tables) : text_(text), tables_(tables) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(pos_, "operator or end of input");
    return e;
  }

 private:
  std::string_view text_;
  const TableSet* tables_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) throw ParseError(pos_, std::string("'") + c + "'");
    ++pos_;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        lhs = lhs + term();
      } else if (peek('-')) {
        ++pos_;
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        lhs = lhs * factor();
      } else if (peek('/')) {
        ++pos_;
        lhs = lhs / factor();
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    Expr base = atom();
    if (!peek('^')) return base;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError(start, "integer exponent");
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
      throw ParseError(start, "integer exponent");
    int value = 0;
    auto res = std::from_chars(text_.data() + digits, text_.data() + pos_, value);
    if (res.ec != std::errc{}) throw ParseError(start, "integer exponent in range");
    return Expr::power(base, negative ? -value : value);
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return named();
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return Expr::unary(Op::Neg, factor());
    }
    throw ParseError(pos_, "expression");
  }

  Expr number() {
    const std::size_t start = pos_;
    double value = 0.0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc{} || !std::isfinite(value)) throw ParseError(start, "number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return Expr::constant(value);
  }

  Expr named() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);
    if (id == "x") return Expr::variable(Var::X);
    if (id == "y") return Expr::variable(Var::Y);
    if (id == "z") return Expr::variable(Var::Z);
    for (const auto& f : kFunctions) {
      if (f.name == id) {
        expect('(');
        Expr arg = expr();
        expect(')');
        return Expr::unary(f.op, arg);
      }
    }
    if (tables_) {
      if (auto it = tables_->find(id); it != tables_->end()) {
        int order = 0;
        while (pos_ < text_.size() && text_[pos_] == '\'') {
          ++order;
          ++pos_;
        }
        expect('(');
        Expr arg = expr();
        expect(')');
        return Expr::tabulated(it->second, order, arg);
      }
    }
    throw ParseError(start, "variable (x, y, z), function name or number");
  }
};

}  // namespace

Expr parse(std::string_view text, const TableSet* tables) { return Parser(text, tables).run(); }

}  // namespace varcert
