#include "expr_ast.hpp"

#include <cctype>

#include "formkit/fields.hpp"

namespace formkit::expr {
namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }

  NodePtr parse() {
    NodePtr e = sum();
    skip();
    if (pos != s.size())
      throw ParseError("unexpected trailing input at position " + std::to_string(pos) +
                       " in '" + s + "'");
    return e;
  }

  NodePtr sum() {
    NodePtr l = product();
    while (true) {
      if (eat('+')) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::Add;
        n->lhs = std::move(l);
        n->rhs = product();
        l = std::move(n);
      } else if (eat('-')) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::Sub;
        n->lhs = std::move(l);
        n->rhs = product();
        l = std::move(n);
      } else {
        return l;
      }
    }
  }

  NodePtr product() {
    NodePtr l = factor();
    while (true) {
      if (eat('*')) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::Mul;
        n->lhs = std::move(l);
        n->rhs = factor();
        l = std::move(n);
      } else if (eat('/')) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::Div;
        n->lhs = std::move(l);
        n->rhs = factor();
        l = std::move(n);
      } else {
        return l;
      }
    }
  }

  NodePtr factor() {
    if (eat('-')) {
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::Neg;
      n->lhs = factor();
      return n;
    }
    NodePtr base = primary();
    if (eat('^')) {
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::Pow;
      n->lhs = std::move(base);
      n->rhs = primary();
      if (n->rhs->kind != Node::Kind::Number || n->rhs->number < 0)
        throw ParseError("exponent must be a nonnegative integer literal");
      return n;
    }
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos >= s.size()) throw ParseError("unexpected end of expression in '" + s + "'");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      NodePtr e = sum();
      if (!eat(')')) throw ParseError("missing ')' in '" + s + "'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long long v = 0;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        v = v * 10 + (s[pos] - '0');
        if (v > (1ll << 60)) throw ParseError("integer literal too large");
        ++pos;
      }
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::Number;
      n->number = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string id;
      while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
        id += s[pos++];
      auto n = std::make_unique<Node>();
      n->kind = Node::Kind::Ident;
      n->ident = id;
      return n;
    }
    throw ParseError(std::string("unexpected character '") + c + "' in '" + s + "'");
  }
};

}  // namespace

NodePtr parse_expression(const std::string& text) {
  Parser p{text};
  return p.parse();
}

}  // namespace formkit::expr
