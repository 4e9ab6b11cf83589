#include "petrocheck/expr.hpp"

#include <cctype>
#include <cmath>
#include <vector>

namespace petrocheck {

struct ExprNode {
  enum class Kind { Number, Imag, Var, Time, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };
  Kind kind;
  double value = 0.0;   // Number
  int var_index = 0;    // Var (0-based)
  int exponent = 0;     // Pow
  std::shared_ptr<const ExprNode> lhs, rhs;

  Complex eval(std::span<const double> x, double t) const {
    switch (kind) {
      case Kind::Number: return Complex(value);
      case Kind::Imag: return Complex(0.0, 1.0);
      case Kind::Var: return Complex(x[var_index]);
      case Kind::Time: return Complex(t);
      case Kind::Add: return lhs->eval(x, t) + rhs->eval(x, t);
      case Kind::Sub: return lhs->eval(x, t) - rhs->eval(x, t);
      case Kind::Mul: return lhs->eval(x, t) * rhs->eval(x, t);
      case Kind::Div: {
        Complex d = rhs->eval(x, t);
        if (std::abs(d) == 0.0) throw InputError("coefficient evaluation: division by zero");
        return lhs->eval(x, t) / d;
      }
      case Kind::Pow: {
        Complex b = lhs->eval(x, t);
        int e = exponent;
        bool inv = e < 0;
        if (inv) e = -e;
        Complex r{1.0};
        Complex base = b;
        while (e > 0) {
          if (e & 1) r *= base;
          base *= base;
          e >>= 1;
        }
        if (inv) {
          if (std::abs(r) == 0.0) throw InputError("coefficient evaluation: zero to negative power");
          return Complex(1.0) / r;
        }
        return r;
      }
      case Kind::Neg: return -lhs->eval(x, t);
      case Kind::Sin: return std::sin(lhs->eval(x, t));
      case Kind::Cos: return std::cos(lhs->eval(x, t));
      case Kind::Exp: return std::exp(lhs->eval(x, t));
    }
    throw InputError("coefficient evaluation: bad node");
  }
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

class Parser {
 public:
  Parser(const std::string& text, int nvars) : s_(text), nvars_(nvars) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("coefficient expression, column " + std::to_string(pos_ + 1) +
                     ": " + msg + " in '" + s_ + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (eat('+')) {
        left = make({.kind = ExprNode::Kind::Add, .lhs = left, .rhs = term()});
      } else if (eat('-')) {
        left = make({.kind = ExprNode::Kind::Sub, .lhs = left, .rhs = term()});
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      if (eat('*')) {
        left = make({.kind = ExprNode::Kind::Mul, .lhs = left, .rhs = unary()});
      } else if (eat('/')) {
        left = make({.kind = ExprNode::Kind::Div, .lhs = left, .rhs = unary()});
      } else {
        return left;
      }
    }
  }

  NodePtr unary() {
    if (eat('-')) return make({.kind = ExprNode::Kind::Neg, .lhs = unary()});
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) {
      skip_ws();
      bool neg = eat('-');
      skip_ws();
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        fail("expected integer exponent after '^'");
      int e = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        e = e * 10 + (s_[pos_++] - '0');
      return make({.kind = ExprNode::Kind::Pow, .exponent = neg ? -e : e, .lhs = base});
    }
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character");
  }

  NodePtr number() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t save = pos_;
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    try {
      v = std::stod(s_.substr(start, pos_ - start));
    } catch (const std::exception&) {
      fail("bad numeric literal");
    }
    return make({.kind = ExprNode::Kind::Number, .value = v});
  }

  NodePtr identifier() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string id = s_.substr(start, pos_ - start);
    if (id == "i") return make({.kind = ExprNode::Kind::Imag});
    if (id == "t") return make({.kind = ExprNode::Kind::Time});
    if (id == "sin" || id == "cos" || id == "exp") {
      if (!eat('(')) fail("expected '(' after function name");
      NodePtr a = expr();
      if (!eat(')')) fail("expected ')'");
      ExprNode::Kind k = id == "sin"   ? ExprNode::Kind::Sin
                         : id == "cos" ? ExprNode::Kind::Cos
                                       : ExprNode::Kind::Exp;
      return make({.kind = k, .lhs = a});
    }
    if (id.size() >= 2 && id[0] == 'x') {
      int idx = 0;
      bool ok = true;
      for (size_t i = 1; i < id.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(id[i]))) {
          ok = false;
          break;
        }
        idx = idx * 10 + (id[i] - '0');
      }
      if (ok) {
        if (idx < 1 || idx > nvars_)
          fail("variable " + id + " out of range for n=" + std::to_string(nvars_));
        return make({.kind = ExprNode::Kind::Var, .var_index = idx - 1});
      }
    }
    fail("unknown identifier '" + id + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
  int nvars_;
};

}  // namespace

CoeffExpr CoeffExpr::parse(const std::string& text, int num_spatial_vars) {
  Parser p(text, num_spatial_vars);
  CoeffExpr out;
  out.root_ = p.run();
  out.text_ = text;
  return out;
}

Complex CoeffExpr::eval(std::span<const double> x, double t) const {
  if (!root_) throw InputError("evaluating an empty coefficient expression");
  return root_->eval(x, t);
}

}  // namespace petrocheck
