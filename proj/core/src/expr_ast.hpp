#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace formkit::expr {

/// Tiny arithmetic-expression AST shared by field-element and polynomial parsing.
/// Grammar: sums of products of signed powers; '^' takes a nonnegative integer.
struct Node {
  enum class Kind { Number, Ident, Add, Sub, Mul, Div, Pow, Neg };
  Kind kind;
  long long number = 0;
  std::string ident;
  std::unique_ptr<Node> lhs, rhs;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr parse_expression(const std::string& text);

}  // namespace formkit::expr
