#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "formkit/fields.hpp"
#include "formkit/mpoly.hpp"

namespace formkit {

/// A named polynomial ring over a field tower. Variable names must not shadow the
/// tower's generators (the parser resolves identifiers against both).
struct PolyRing {
  FieldPtr field;
  std::vector<std::string> vars;

  std::size_t index_of(const std::string& name) const;
  bool has_var(const std::string& name) const;
};
using PolyRingPtr = std::shared_ptr<const PolyRing>;

PolyRingPtr make_ring(const FieldPtr& K, std::vector<std::string> vars);
bool same_ring(const PolyRingPtr& a, const PolyRingPtr& b);

class Poly {
 public:
  using Body = MPoly<FieldElem>;
  using Exponents = std::vector<unsigned>;

  Poly() = default;
  explicit Poly(PolyRingPtr ring) : ring_(std::move(ring)), body_(ring_->vars.size()) {}
  Poly(PolyRingPtr ring, Body body);

  static Poly constant(const PolyRingPtr& ring, const FieldElem& c);
  static Poly variable(const PolyRingPtr& ring, const std::string& name);

  const PolyRingPtr& ring() const { return ring_; }
  const Body& body() const { return body_; }
  const Body::TermMap& terms() const { return body_.terms(); }
  std::size_t nvars() const { return ring_->vars.size(); }

  bool is_zero() const { return body_.is_zero(); }
  bool is_constant() const { return body_.is_constant(); }
  FieldElem constant_term() const { return body_.constant_term(ring_->field->zero()); }
  long total_degree() const { return body_.total_degree(); }
  long degree_in(const std::string& name) const { return body_.degree_in(ring_->index_of(name)); }
  bool is_homogeneous() const;

  void add_term(const Exponents& e, const FieldElem& c) { body_.add_term(e, c); }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const FieldElem& c) const;
  Poly pow(unsigned long e) const;
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  std::map<long, Poly> homogeneous_components() const;

  /// Substitute variable i by images[i]; images live in a common target ring.
  Poly substitute(const std::vector<Poly>& images) const;
  FieldElem evaluate(const std::vector<FieldElem>& point) const;
  Poly derivative(const std::string& var) const;

  /// Move to a ring with the same variables over an extension tower.
  Poly coefficients_into(const PolyRingPtr& target) const;

  std::string str() const;

 private:
  PolyRingPtr ring_;
  Body body_;
};

Poly parse_poly(const std::string& text, const PolyRingPtr& ring);

/// f(x + y): substitute each designated variable by itself plus its fresh partner.
/// Returns a polynomial in the ring extended by the partner variables (appended in
/// pair order).
Poly double_substitute(const Poly& f, const std::vector<std::pair<std::string, std::string>>& pairs);

/// Exponents multiplied by q, coefficients raised to the q-th power (q a power of
/// the positive characteristic).
Poly poly_frobenius_twist(const Poly& f, unsigned long q);

}  // namespace formkit
