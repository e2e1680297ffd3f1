#pragma once

// Expression trees over a single time variable `t`.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')? power
//   power  := atom ('^' integer)?
//   atom   := number | 'pi' | 't' | ident '(' expr (',' expr)? ')' | '(' expr ')'
//   ident  := sin | cos | tan | abs | tanh | arctan | floor | exp | min | max

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "halanay/error.hpp"

namespace halanay {

enum class Op : std::uint8_t {
  constant,
  pi,
  time,
  add,
  sub,
  mul,
  div,
  neg,
  pow,
  sin,
  cos,
  tan,
  abs,
  tanh,
  arctan,
  floor,
  exp,
  min,
  max,
};

class Expr {
 public:
  struct Node {
    Op op = Op::constant;
    double value = 0.0;  // constant value
    int exponent = 0;    // pow only
    int lhs = -1;
    int rhs = -1;
  };

  /// The constant expression `value`.
  static Expr constant(double value) {
    auto nodes = std::make_shared<std::vector<Node>>();
    nodes->push_back(Node{Op::constant, value, 0, -1, -1});
    return Expr(std::move(nodes));
  }

  Expr() : Expr(constant(0.0)) {}

  [[nodiscard]] double operator()(double t) const { return eval(root(), t); }

  [[nodiscard]] bool is_constant() const {
    for (const auto& n : *nodes_) {
      if (n.op == Op::time) return false;
    }
    return true;
  }

  [[nodiscard]] std::string to_string() const {
    std::string out;
    print(root(), out);
    return out;
  }

  [[nodiscard]] const std::vector<Node>& nodes() const { return *nodes_; }

 private:
  friend class ExprParser;

  explicit Expr(std::shared_ptr<const std::vector<Node>> nodes) : nodes_(std::move(nodes)) {}

  [[nodiscard]] int root() const { return static_cast<int>(nodes_->size()) - 1; }

  static double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvaluationError(std::string("non-finite result in ") + what);
    return v;
  }

  [[nodiscard]] double eval(int i, double t) const {
    const Node& n = (*nodes_)[static_cast<std::size_t>(i)];
    switch (n.op) {
      case Op::constant: return n.value;
      case Op::pi: return std::numbers::pi;
      case Op::time: return t;
      case Op::add: return eval(n.lhs, t) + eval(n.rhs, t);
      case Op::sub: return eval(n.lhs, t) - eval(n.rhs, t);
      case Op::mul: return eval(n.lhs, t) * eval(n.rhs, t);
      case Op::div: {
        const double num = eval(n.lhs, t);
        const double den = eval(n.rhs, t);
        if (den == 0.0) throw EvaluationError("division by zero at t = " + std::to_string(t));
        return checked(num / den, "division");
      }
      case Op::neg: return -eval(n.lhs, t);
      case Op::pow: {
        const double base = eval(n.lhs, t);
        double r = 1.0;
        for (int k = 0; k < n.exponent; ++k) r *= base;
        return checked(r, "power");
      }
      case Op::sin: return std::sin(eval(n.lhs, t));
      case Op::cos: return std::cos(eval(n.lhs, t));
      case Op::tan: return checked(std::tan(eval(n.lhs, t)), "tan");
      case Op::abs: return std::abs(eval(n.lhs, t));
      case Op::tanh: return std::tanh(eval(n.lhs, t));
      case Op::arctan: return std::atan(eval(n.lhs, t));
      case Op::floor: return std::floor(eval(n.lhs, t));
      case Op::exp: return checked(std::exp(eval(n.lhs, t)), "exp");
      case Op::min: return std::min(eval(n.lhs, t), eval(n.rhs, t));
      case Op::max: return std::max(eval(n.lhs, t), eval(n.rhs, t));
    }
    return 0.0;
  }

  // Every printed node is a valid `power`: binary operators are always
  // parenthesized, so the output re-parses to the same tree shape.
  void print(int i, std::string& out) const {
    const Node& n = (*nodes_)[static_cast<std::size_t>(i)];
    auto binary = [&](const char* sym) {
      out += '(';
      print(n.lhs, out);
      out += sym;
      print(n.rhs, out);
      out += ')';
    };
    auto call = [&](const char* name) {
      out += name;
      out += '(';
      print(n.lhs, out);
      if (n.rhs >= 0) {
        out += ", ";
        print(n.rhs, out);
      }
      out += ')';
    };
    switch (n.op) {
      case Op::constant: {
        std::array<char, 32> buf{};
        auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), std::abs(n.value));
        (void)ec;
        if (n.value < 0) out += "(-";
        out.append(buf.data(), end);
        if (n.value < 0) out += ')';
        break;
      }
      case Op::pi: out += "pi"; break;
      case Op::time: out += "t"; break;
      case Op::add: binary(" + "); break;
      case Op::sub: binary(" - "); break;
      case Op::mul: binary(" * "); break;
      case Op::div: binary(" / "); break;
      case Op::neg:
        out += "(-";
        print(n.lhs, out);
        out += ')';
        break;
      case Op::pow:
        out += '(';
        print(n.lhs, out);
        out += ")^" + std::to_string(n.exponent);
        break;
      case Op::sin: call("sin"); break;
      case Op::cos: call("cos"); break;
      case Op::tan: call("tan"); break;
      case Op::abs: call("abs"); break;
      case Op::tanh: call("tanh"); break;
      case Op::arctan: call("arctan"); break;
      case Op::floor: call("floor"); break;
      case Op::exp: call("exp"); break;
      case Op::min: call("min"); break;
      case Op::max: call("max"); break;
    }
  }

  std::shared_ptr<const std::vector<Node>> nodes_;
};

/// Recursive-descent parser; nodes are appended in post-order.
class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  Expr parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return Expr(std::make_shared<const std::vector<Expr::Node>>(std::move(nodes_)));
  }

 private:
  int push(Op op, int lhs = -1, int rhs = -1, double value = 0.0, int exponent = 0) {
    nodes_.push_back(Expr::Node{op, value, exponent, lhs, rhs});
    return static_cast<int>(nodes_.size()) - 1;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = push(Op::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = push(Op::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = push(Op::mul, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = push(Op::div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  int parse_factor() {
    if (accept('-')) return push(Op::neg, parse_power());
    return parse_power();
  }

  int parse_power() {
    const int base = parse_atom();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected nonnegative integer exponent", start);
    int k = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, k);
    if (ec != std::errc{} || ptr != src_.data() + pos_ || k > 64) {
      throw ParseError("exponent out of range", start);
    }
    return push(Op::pow, base, -1, 0.0, k);
  }

  int parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc{} || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return push(Op::constant, -1, -1, v);
  }

  int parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      const int inner = parse_expr();
      expect(')');
      return inner;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view ident = src_.substr(start, pos_ - start);
    if (ident == "t") return push(Op::time);
    if (ident == "pi") return push(Op::pi);

    struct Fn {
      std::string_view name;
      Op op;
      int arity;
    };
    static constexpr std::array<Fn, 10> functions{{
        {"sin", Op::sin, 1},
        {"cos", Op::cos, 1},
        {"tan", Op::tan, 1},
        {"abs", Op::abs, 1},
        {"tanh", Op::tanh, 1},
        {"arctan", Op::arctan, 1},
        {"floor", Op::floor, 1},
        {"exp", Op::exp, 1},
        {"min", Op::min, 2},
        {"max", Op::max, 2},
    }};
    for (const auto& fn : functions) {
      if (fn.name != ident) continue;
      expect('(');
      const int a = parse_expr();
      int b = -1;
      if (fn.arity == 2) {
        expect(',');
        b = parse_expr();
      }
      expect(')');
      return push(fn.op, a, b);
    }
    throw ParseError("unknown identifier '" + std::string(ident) + "'", start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<Expr::Node> nodes_;
};

[[nodiscard]] inline Expr parse_expr(std::string_view source) { return ExprParser(source).parse(); }

}  // namespace halanay
