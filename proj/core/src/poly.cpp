#include "formkit/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace formkit {

std::size_t PolyRing::index_of(const std::string& name) const {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) throw std::logic_error("unknown ring variable: " + name);
  return static_cast<std::size_t>(it - vars.begin());
}

bool PolyRing::has_var(const std::string& name) const {
  return std::find(vars.begin(), vars.end(), name) != vars.end();
}

PolyRingPtr make_ring(const FieldPtr& K, std::vector<std::string> vars) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& v = vars[i];
    if (v.empty() || !std::isalpha(static_cast<unsigned char>(v[0])) ||
        !std::all_of(v.begin(), v.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }))
      throw std::logic_error("invalid variable name: " + v);
    if (K->has_generator(v))
      throw std::logic_error("variable shadows a field generator: " + v);
    for (std::size_t j = i + 1; j < vars.size(); ++j)
      if (vars[j] == v) throw std::logic_error("duplicate variable name: " + v);
  }
  auto r = std::make_shared<PolyRing>();
  r->field = K;
  r->vars = std::move(vars);
  return r;
}

bool same_ring(const PolyRingPtr& a, const PolyRingPtr& b) {
  if (a.get() == b.get()) return true;
  return a->vars == b->vars && Field::compatible(a->field, b->field);
}

static void require_same(const Poly& a, const Poly& b) {
  if (!same_ring(a.ring(), b.ring())) throw std::logic_error("polynomial ring mismatch");
}

Poly::Poly(PolyRingPtr ring, Body body) : ring_(std::move(ring)), body_(std::move(body)) {
  if (body_.nvars() != ring_->vars.size())
    throw std::logic_error("polynomial body arity mismatch");
}

Poly Poly::constant(const PolyRingPtr& ring, const FieldElem& c) {
  if (!Field::compatible(c.field(), ring->field))
    throw std::logic_error("constant from a different tower");
  return Poly(ring, Body(ring->vars.size(), c));
}

Poly Poly::variable(const PolyRingPtr& ring, const std::string& name) {
  return Poly(ring, Body::variable(ring->vars.size(), ring->index_of(name),
                                   ring->field->one()));
}

bool Poly::is_homogeneous() const {
  long d = -1;
  for (const auto& [e, c] : body_.terms()) {
    long s = 0;
    for (unsigned x : e) s += x;
    if (d < 0) d = s;
    if (s != d) return false;
  }
  return true;
}

Poly Poly::operator+(const Poly& o) const {
  require_same(*this, o);
  return Poly(ring_, body_ + o.body_);
}
Poly Poly::operator-(const Poly& o) const {
  require_same(*this, o);
  return Poly(ring_, body_ - o.body_);
}
Poly Poly::operator-() const { return Poly(ring_, -body_); }
Poly Poly::operator*(const Poly& o) const {
  require_same(*this, o);
  return Poly(ring_, body_ * o.body_);
}
Poly Poly::operator*(const FieldElem& c) const { return Poly(ring_, body_ * c); }
Poly Poly::pow(unsigned long e) const {
  if (body_.is_zero()) return e == 0 ? constant(ring_, ring_->field->one()) : *this;
  return Poly(ring_, body_.pow(e));
}
bool Poly::operator==(const Poly& o) const {
  require_same(*this, o);
  return body_ == o.body_;
}

std::map<long, Poly> Poly::homogeneous_components() const {
  std::map<long, Poly> out;
  for (const auto& [e, c] : body_.terms()) {
    long s = 0;
    for (unsigned x : e) s += x;
    auto it = out.find(s);
    if (it == out.end()) it = out.emplace(s, Poly(ring_)).first;
    it->second.add_term(e, c);
  }
  return out;
}

Poly Poly::substitute(const std::vector<Poly>& images) const {
  if (images.size() != nvars()) throw std::logic_error("substitute arity mismatch");
  PolyRingPtr target = images.empty() ? ring_ : images[0].ring();
  Poly acc(target);
  for (const auto& [e, c] : body_.terms()) {
    Poly t = Poly::constant(target, c.embed_into(target->field));
    for (std::size_t i = 0; i < nvars(); ++i)
      if (e[i]) t = t * images[i].pow(e[i]);
    acc = acc + t;
  }
  return acc;
}

FieldElem Poly::evaluate(const std::vector<FieldElem>& point) const {
  return body_.evaluate(point, ring_->field->zero());
}

Poly Poly::derivative(const std::string& var) const {
  std::size_t i = ring_->index_of(var);
  Poly out(ring_);
  for (const auto& [e, c] : body_.terms()) {
    if (e[i] == 0) continue;
    Exponents e2 = e;
    e2[i] -= 1;
    out.add_term(e2, c * ring_->field->from_integer(static_cast<long>(e[i])));
  }
  return out;
}

Poly Poly::coefficients_into(const PolyRingPtr& target) const {
  if (target->vars != ring_->vars) throw std::logic_error("rings differ in variables");
  Poly out(target);
  for (const auto& [e, c] : body_.terms()) out.add_term(e, c.embed_into(target->field));
  return out;
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  const auto& tm = body_.terms();
  for (auto it = tm.rbegin(); it != tm.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_->vars[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (!first) os << " + ";
    first = false;
    std::string cs = c.str();
    if (mono.empty()) {
      os << cs;
    } else if (cs == "1") {
      os << mono;
    } else {
      bool wrap = cs.find('+') != std::string::npos || cs.find('-') != std::string::npos ||
                  cs.find('/') != std::string::npos || cs.find('*') != std::string::npos;
      os << (wrap ? "(" + cs + ")" : cs) << "*" << mono;
    }
  }
  return os.str();
}

Poly double_substitute(const Poly& f,
                       const std::vector<std::pair<std::string, std::string>>& pairs) {
  const PolyRingPtr& R = f.ring();
  std::vector<std::string> vars = R->vars;
  for (const auto& [x, y] : pairs) {
    (void)R->index_of(x);  // must exist
    if (R->has_var(y) || R->field->has_generator(y))
      throw std::logic_error("partner name collision: " + y);
    for (const auto& [x2, y2] : pairs) {
      (void)x2;
      if (&y2 != &y && y2 == y) throw std::logic_error("partner name collision: " + y);
    }
    vars.push_back(y);
  }
  PolyRingPtr E = make_ring(R->field, vars);
  std::vector<Poly> images;
  for (const auto& v : R->vars) {
    Poly img = Poly::variable(E, v);
    for (const auto& [x, y] : pairs)
      if (x == v) img = img + Poly::variable(E, y);
    images.push_back(img);
  }
  return f.substitute(images);
}

Poly poly_frobenius_twist(const Poly& f, unsigned long q) {
  long p = f.ring()->field->characteristic();
  if (q == 1) return f;
  if (p <= 0) throw FieldError("Frobenius twist needs positive characteristic");
  unsigned long qq = q;
  while (qq % static_cast<unsigned long>(p) == 0) qq /= static_cast<unsigned long>(p);
  if (qq != 1) throw FieldError("twist order must be a power of the characteristic");
  Poly out(f.ring());
  for (const auto& [e, c] : f.terms()) {
    Poly::Exponents e2 = e;
    for (auto& x : e2) {
      unsigned long v = static_cast<unsigned long>(x) * q;
      if (v > 1u << 30) throw std::domain_error("twisted exponent overflow");
      x = static_cast<unsigned>(v);
    }
    out.add_term(e2, c.pow(q));
  }
  return out;
}

}  // namespace formkit
