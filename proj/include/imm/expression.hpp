#pragma once

// Arithmetic expressions in the parameters u, v:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          (right associative)
//   primary := number | u | v | pi | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | sqrt | log
// Parsed once into a tree and evaluated generically (double, Dual, Jet).

#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "imm/autodiff.hpp"
#include "imm/errors.hpp"

namespace imm {

class Expression {
 public:
  enum class Op { constant, var_u, var_v, add, sub, mul, div, pow, neg, sin, cos, exp, sqrt, log };

  struct Node {
    Op op = Op::constant;
    double value = 0.0;
    int lhs = -1;
    int rhs = -1;
  };

  /// Throws Error(ErrorKind::parse) with the offending column.
  static Expression parse(std::string_view text);

  const std::string& source() const { return source_; }

  template <typename T>
  T eval(const T& u, const T& v) const {
    return eval_node<T>(root_, u, v);
  }

 private:
  template <typename T>
  T eval_node(int index, const T& u, const T& v) const {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    const Node& n = nodes_[static_cast<size_t>(index)];
    switch (n.op) {
      case Op::constant: return T(n.value);
      case Op::var_u: return u;
      case Op::var_v: return v;
      case Op::add: return eval_node<T>(n.lhs, u, v) + eval_node<T>(n.rhs, u, v);
      case Op::sub: return eval_node<T>(n.lhs, u, v) - eval_node<T>(n.rhs, u, v);
      case Op::mul: return eval_node<T>(n.lhs, u, v) * eval_node<T>(n.rhs, u, v);
      case Op::div: return eval_node<T>(n.lhs, u, v) / eval_node<T>(n.rhs, u, v);
      case Op::neg: return -eval_node<T>(n.lhs, u, v);
      case Op::sin: return sin(eval_node<T>(n.lhs, u, v));
      case Op::cos: return cos(eval_node<T>(n.lhs, u, v));
      case Op::exp: return exp(eval_node<T>(n.lhs, u, v));
      case Op::sqrt: return sqrt(eval_node<T>(n.lhs, u, v));
      case Op::log: return log(eval_node<T>(n.lhs, u, v));
      case Op::pow: {
        const Node& e = nodes_[static_cast<size_t>(n.rhs)];
        const T base = eval_node<T>(n.lhs, u, v);
        if (e.op == Op::constant && e.value == std::round(e.value) && std::abs(e.value) <= 64.0) {
          return ipow(base, static_cast<int>(e.value));
        }
        return exp(eval_node<T>(n.rhs, u, v) * log(base));
      }
    }
    return T(0.0);
  }

  friend class ExpressionParser;
  std::string source_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace imm
