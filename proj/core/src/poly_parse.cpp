#include "expr_ast.hpp"
#include "formkit/poly.hpp"

namespace formkit {
namespace {

using expr::Node;

Poly eval_poly(const Node& n, const PolyRingPtr& R) {
  switch (n.kind) {
    case Node::Kind::Number:
      return Poly::constant(R, R->field->from_integer(static_cast<long>(n.number)));
    case Node::Kind::Ident:
      if (R->has_var(n.ident)) return Poly::variable(R, n.ident);
      if (R->field->has_generator(n.ident))
        return Poly::constant(R, R->field->generator(n.ident));
      throw ParseError("unknown identifier '" + n.ident + "' in polynomial");
    case Node::Kind::Add:
      return eval_poly(*n.lhs, R) + eval_poly(*n.rhs, R);
    case Node::Kind::Sub:
      return eval_poly(*n.lhs, R) - eval_poly(*n.rhs, R);
    case Node::Kind::Mul:
      return eval_poly(*n.lhs, R) * eval_poly(*n.rhs, R);
    case Node::Kind::Div: {
      Poly d = eval_poly(*n.rhs, R);
      if (!d.is_constant())
        throw ParseError("polynomial division is only allowed by constants");
      FieldElem c = d.constant_term();
      if (c.is_zero()) throw ParseError("division by zero in polynomial literal");
      return eval_poly(*n.lhs, R) * c.inverse();
    }
    case Node::Kind::Pow:
      return eval_poly(*n.lhs, R).pow(static_cast<unsigned long>(n.rhs->number));
    case Node::Kind::Neg:
      return -eval_poly(*n.lhs, R);
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace

Poly parse_poly(const std::string& text, const PolyRingPtr& ring) {
  auto ast = expr::parse_expression(text);
  return eval_poly(*ast, ring);
}

}  // namespace formkit
