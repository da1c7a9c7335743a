#include <cctype>

#include "expr_ast.hpp"
#include "formkit/fields.hpp"

namespace formkit {
namespace {

using expr::Node;

FieldElem eval_elem(const Node& n, const FieldPtr& K) {
  switch (n.kind) {
    case Node::Kind::Number:
      return K->from_integer(static_cast<long>(n.number));
    case Node::Kind::Ident:
      if (!K->has_generator(n.ident))
        throw ParseError("unknown generator '" + n.ident + "' in field " + K->spec_string());
      return K->generator(n.ident);
    case Node::Kind::Add:
      return eval_elem(*n.lhs, K) + eval_elem(*n.rhs, K);
    case Node::Kind::Sub:
      return eval_elem(*n.lhs, K) - eval_elem(*n.rhs, K);
    case Node::Kind::Mul:
      return eval_elem(*n.lhs, K) * eval_elem(*n.rhs, K);
    case Node::Kind::Div: {
      FieldElem d = eval_elem(*n.rhs, K);
      if (d.is_zero()) throw ParseError("division by zero in field element literal");
      return eval_elem(*n.lhs, K) / d;
    }
    case Node::Kind::Pow:
      return eval_elem(*n.lhs, K).pow(static_cast<unsigned long>(n.rhs->number));
    case Node::Kind::Neg:
      return -eval_elem(*n.lhs, K);
  }
  throw std::logic_error("unreachable expression kind");
}

/// Evaluate as a univariate polynomial in `var` with tower coefficients.
using UPoly = std::vector<FieldElem>;  // little-endian, possibly empty (zero)

UPoly up_add(const UPoly& a, const UPoly& b, const FieldPtr& K) {
  UPoly r(std::max(a.size(), b.size()), K->zero());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = r[i] + a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] + b[i];
  while (!r.empty() && r.back().is_zero()) r.pop_back();
  return r;
}

UPoly up_mul(const UPoly& a, const UPoly& b, const FieldPtr& K) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, K->zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  while (!r.empty() && r.back().is_zero()) r.pop_back();
  return r;
}

UPoly eval_upoly(const Node& n, const FieldPtr& K, const std::string& var) {
  switch (n.kind) {
    case Node::Kind::Number: {
      FieldElem c = K->from_integer(static_cast<long>(n.number));
      return c.is_zero() ? UPoly{} : UPoly{c};
    }
    case Node::Kind::Ident:
      if (n.ident == var) return {K->zero(), K->one()};
      return {eval_elem(n, K)};
    case Node::Kind::Add:
      return up_add(eval_upoly(*n.lhs, K, var), eval_upoly(*n.rhs, K, var), K);
    case Node::Kind::Sub: {
      UPoly b = eval_upoly(*n.rhs, K, var);
      for (auto& c : b) c = -c;
      return up_add(eval_upoly(*n.lhs, K, var), b, K);
    }
    case Node::Kind::Mul:
      return up_mul(eval_upoly(*n.lhs, K, var), eval_upoly(*n.rhs, K, var), K);
    case Node::Kind::Div: {
      UPoly b = eval_upoly(*n.rhs, K, var);
      if (b.size() > 1)
        throw ParseError("cannot divide by a polynomial in the adjoined generator");
      if (b.empty()) throw ParseError("division by zero");
      UPoly a = eval_upoly(*n.lhs, K, var);
      FieldElem inv = b[0].inverse();
      for (auto& c : a) c = c * inv;
      return a;
    }
    case Node::Kind::Pow: {
      UPoly base = eval_upoly(*n.lhs, K, var);
      UPoly acc{K->one()};
      for (long long i = 0; i < n.rhs->number; ++i) acc = up_mul(acc, base, K);
      return acc;
    }
    case Node::Kind::Neg: {
      UPoly a = eval_upoly(*n.lhs, K, var);
      for (auto& c : a) c = -c;
      return a;
    }
  }
  throw std::logic_error("unreachable expression kind");
}

struct SpecCursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip();
    return pos >= s.size();
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw ParseError(std::string("expected '") + c + "' at position " +
                       std::to_string(pos) + " in field spec '" + s + "'");
  }
  std::string ident() {
    skip();
    std::string id;
    while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos])))
      id += s[pos++];
    if (id.empty()) throw ParseError("expected identifier in field spec '" + s + "'");
    return id;
  }
  unsigned long integer() {
    skip();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      throw ParseError("expected integer in field spec '" + s + "'");
    unsigned long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + static_cast<unsigned long>(s[pos] - '0');
      if (v > (1ul << 40)) throw ParseError("integer too large in field spec");
      ++pos;
    }
    return v;
  }
  /// Text up to the matching ')' for an already-consumed '('.
  std::string until_close() {
    std::string out;
    int depth = 1;
    while (pos < s.size()) {
      char c = s[pos];
      if (c == '(') ++depth;
      if (c == ')') {
        if (--depth == 0) {
          ++pos;
          return out;
        }
      }
      out += c;
      ++pos;
    }
    throw ParseError("unbalanced parentheses in field spec '" + s + "'");
  }
};

}  // namespace

FieldPtr parse_field_spec(const std::string& spec) {
  SpecCursor c{spec};
  c.skip();
  FieldPtr K;
  std::string head = c.ident();
  if (head == "QQ") {
    K = Field::rationals();
  } else if (head == "GF") {
    c.expect('(');
    unsigned long p = c.integer();
    c.expect(')');
    K = Field::prime_field(static_cast<long>(p));
  } else {
    throw ParseError("field spec must start with QQ or GF(p): '" + spec + "'");
  }
  while (!c.done()) {
    if (c.eat('(')) {
      // transcendental generators
      while (true) {
        K = Field::with_transcendental(K, c.ident());
        if (c.eat(',')) continue;
        c.expect(')');
        break;
      }
    } else if (c.eat('[')) {
      std::string gen = c.ident();
      c.expect(']');
      c.expect('/');
      c.expect('(');
      std::string body = c.until_close();
      auto ast = expr::parse_expression(body);
      UPoly m = eval_upoly(*ast, K, gen);
      if (m.size() < 3)
        throw ParseError("adjoined relation must have degree >= 2 in " + gen);
      K = Field::with_algebraic(K, gen, m);
    } else if (c.eat('^')) {
      c.expect('(');
      if (c.integer() != 1) throw ParseError("root layer must have the form ^(1/q)");
      c.expect('/');
      unsigned long q = c.integer();
      c.expect(')');
      K = Field::with_pth_root_layer(K, static_cast<unsigned>(q));
    } else {
      throw ParseError("unexpected input at position " + std::to_string(c.pos) +
                       " in field spec '" + spec + "'");
    }
  }
  return K;
}

FieldElem parse_field_element(const std::string& text, const FieldPtr& K) {
  auto ast = expr::parse_expression(text);
  return eval_elem(*ast, K);
}

}  // namespace formkit
