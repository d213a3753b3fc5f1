#include "imm/expression.hpp"

#include <cctype>
#include <charconv>
#include <numbers>

namespace imm {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, Expression& out) : text_(text), out_(out) {}

  int parse() {
    const int root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::parse, "expression '" + std::string(text_) + "': " + what + " at column " +
                                      std::to_string(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int add(Op op, int lhs = -1, int rhs = -1, double value = 0.0) {
    out_.nodes_.push_back({op, value, lhs, rhs});
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  int expr() {
    int lhs = term();
    for (;;) {
      if (accept('+')) lhs = add(Op::add, lhs, term());
      else if (accept('-')) lhs = add(Op::sub, lhs, term());
      else return lhs;
    }
  }

  int term() {
    int lhs = unary();
    for (;;) {
      if (accept('*')) lhs = add(Op::mul, lhs, unary());
      else if (accept('/')) lhs = add(Op::div, lhs, unary());
      else return lhs;
    }
  }

  int unary() {
    if (accept('-')) return add(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  int power() {
    const int base = primary();
    if (accept('^')) return add(Op::pow, base, unary());
    return base;
  }

  int primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      const char* begin = text_.data() + pos_;
      const auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
      if (ec != std::errc()) fail("malformed number");
      pos_ += static_cast<size_t>(ptr - begin);
      return add(Op::constant, -1, -1, value);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "u") return add(Op::var_u);
      if (name == "v") return add(Op::var_v);
      if (name == "pi") return add(Op::constant, -1, -1, std::numbers::pi);
      Op fn;
      if (name == "sin") fn = Op::sin;
      else if (name == "cos") fn = Op::cos;
      else if (name == "exp") fn = Op::exp;
      else if (name == "sqrt") fn = Op::sqrt;
      else if (name == "log") fn = Op::log;
      else {
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
      }
      if (!accept('(')) fail("expected '(' after " + std::string(name));
      const int arg = expr();
      if (!accept(')')) fail("expected ')'");
      return add(fn, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  Expression& out_;
  size_t pos_ = 0;
};

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.source_ = std::string(text);
  ExpressionParser parser(text, e);
  e.root_ = parser.parse();
  return e;
}

}  // namespace imm
