// Small expression grammar for PDO coefficients: complex literals (with the
// imaginary unit token i), variables x1..xn and t, operators + - * / ^
// (integer powers), parentheses, and the functions sin, cos, exp.
#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>

#include "petrocheck/poly.hpp"

namespace petrocheck {

struct ExprNode;

class CoeffExpr {
 public:
  CoeffExpr() = default;

  // Throws InputError with a position-anchored message on bad syntax or an
  // out-of-range variable.
  static CoeffExpr parse(const std::string& text, int num_spatial_vars);

  bool valid() const { return root_ != nullptr; }
  const std::string& text() const { return text_; }

  // x must have num_spatial_vars entries.
  Complex eval(std::span<const double> x, double t) const;

 private:
  std::shared_ptr<const ExprNode> root_;
  std::string text_;
};

}  // namespace petrocheck
