#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace formkit {

/// Sparse multivariate polynomial over a field-like coefficient type C.
/// C must provide is_zero(), zero_like(), one_like(), inverse(), +, -, *, ==.
/// Variables are anonymous slots 0..nvars-1; naming lives in higher layers.
template <class C>
class MPoly {
 public:
  using Exponents = std::vector<unsigned>;
  using TermMap = std::map<Exponents, C>;

  MPoly() : nvars_(0) {}
  explicit MPoly(std::size_t nvars) : nvars_(nvars) {}
  MPoly(std::size_t nvars, const C& c) : nvars_(nvars) {
    if (!c.is_zero()) terms_.emplace(Exponents(nvars, 0), c);
  }
  static MPoly monomial(std::size_t nvars, const Exponents& e, const C& c) {
    MPoly f(nvars);
    if (!c.is_zero()) terms_check(e, nvars), f.terms_.emplace(e, c);
    return f;
  }
  static MPoly variable(std::size_t nvars, std::size_t idx, const C& one) {
    Exponents e(nvars, 0);
    e.at(idx) = 1;
    return monomial(nvars, e, one);
  }

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  bool is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
  }
  /// Constant term (requires a witness coefficient to produce a typed zero).
  C constant_term(const C& zero) const {
    auto it = terms_.find(Exponents(nvars_, 0));
    return it == terms_.end() ? zero.zero_like() : it->second;
  }

  long total_degree() const {
    long d = -1;
    for (const auto& [e, c] : terms_) {
      long s = 0;
      for (unsigned x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }
  long degree_in(std::size_t var) const {
    long d = -1;
    for (const auto& [e, c] : terms_) d = std::max<long>(d, e.at(var));
    return d;
  }

  void add_term(const Exponents& e, const C& c) {
    terms_check(e, nvars_);
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  MPoly operator+(const MPoly& o) const {
    require_same(o);
    MPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  MPoly operator-(const MPoly& o) const {
    require_same(o);
    MPoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
  }
  MPoly operator-() const {
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  MPoly operator*(const MPoly& o) const {
    require_same(o);
    MPoly r(nvars_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_) {
        Exponents e(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
        r.add_term(e, c1 * c2);
      }
    return r;
  }
  MPoly operator*(const C& c) const {
    MPoly r(nvars_);
    if (c.is_zero()) return r;
    for (const auto& [e, k] : terms_) {
      C v = k * c;
      if (!v.is_zero()) r.terms_.emplace(e, v);
    }
    return r;
  }
  bool operator==(const MPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
  bool operator!=(const MPoly& o) const { return !(*this == o); }
  bool operator<(const MPoly& o) const { return terms_ < o.terms_; }

  MPoly pow(unsigned long e) const {
    MPoly acc(nvars_);
    bool started = false;
    MPoly base = *this;
    while (e) {
      if (e & 1) {
        acc = started ? acc * base : base;
        started = true;
      }
      e >>= 1;
      if (e) base = base * base;
    }
    if (!started) {
      // x^0 = 1; need a coefficient witness
      if (terms_.empty()) throw std::domain_error("0^0 of empty polynomial");
      acc = MPoly(nvars_, terms_.begin()->second.one_like());
    }
    return acc;
  }

  /// Substitute each variable by the given polynomial (all over the same target ring).
  MPoly substitute(const std::vector<MPoly>& images) const {
    if (images.size() != nvars_) throw std::logic_error("substitute arity mismatch");
    std::size_t m = nvars_ == 0 ? 0 : images[0].nvars();
    MPoly r(m);
    for (const auto& [e, c] : terms_) {
      MPoly t(m, c);
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i]) t = t * images[i].pow(e[i]);
      r = r + t;
    }
    return r;
  }

  C evaluate(const std::vector<C>& point, const C& zero) const {
    if (point.size() != nvars_) throw std::logic_error("evaluate arity mismatch");
    C acc = zero.zero_like();
    for (const auto& [e, c] : terms_) {
      C t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (unsigned k = 0; k < e[i]; ++k) t = t * point[i];
      acc = acc + t;
    }
    return acc;
  }

  /// Leading (term, coeff) under plain lex order on exponent vectors.
  std::pair<Exponents, C> lex_leading() const {
    if (terms_.empty()) throw std::domain_error("leading term of zero");
    return *terms_.rbegin();
  }

  /// Exact division; nullopt if not divisible.
  std::optional<MPoly> divided_by(const MPoly& g) const {
    require_same(g);
    if (g.is_zero()) throw std::domain_error("division by zero polynomial");
    MPoly r = *this;
    MPoly q(nvars_);
    auto [ge, gc] = g.lex_leading();
    C gci = gc.inverse();
    while (!r.is_zero()) {
      auto [re, rc] = r.lex_leading();
      Exponents d(nvars_);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (re[i] < ge[i]) return std::nullopt;
        d[i] = re[i] - ge[i];
      }
      C qc = rc * gci;
      MPoly t = monomial(nvars_, d, qc);
      q = q + t;
      r = r - t * g;
    }
    return q;
  }

  /// Re-embed into a ring with more variables (new slots appended, exponent 0).
  MPoly padded(std::size_t new_nvars) const {
    if (new_nvars < nvars_) throw std::logic_error("padded cannot drop variables");
    MPoly r(new_nvars);
    for (const auto& [e, c] : terms_) {
      Exponents e2 = e;
      e2.resize(new_nvars, 0);
      r.terms_.emplace(e2, c);
    }
    return r;
  }

  /// View as univariate in `var`: dense coefficient list (each an MPoly with var removed-in-place,
  /// i.e. same nvars but degree 0 in var).
  std::vector<MPoly> univariate_in(std::size_t var) const {
    long d = degree_in(var);
    std::vector<MPoly> cs(static_cast<std::size_t>(d < 0 ? 0 : d + 1), MPoly(nvars_));
    for (const auto& [e, c] : terms_) {
      Exponents e2 = e;
      unsigned k = e2[var];
      e2[var] = 0;
      cs[k].add_term(e2, c);
    }
    return cs;
  }
  static MPoly from_univariate(std::size_t var, const std::vector<MPoly>& cs, std::size_t nvars) {
    MPoly r(nvars);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      for (const auto& [e, c] : cs[k].terms_) {
        Exponents e2 = e;
        e2[var] += static_cast<unsigned>(k);
        r.add_term(e2, c);
      }
    }
    return r;
  }

  /// GCD of multivariate polynomials over a field (primitive PRS), normalized so the
  /// lex-leading coefficient is 1.
  static MPoly gcd(const MPoly& a, const MPoly& b) {
    MPoly g = gcd_raw(a, b);
    if (!g.is_zero()) {
      auto [e, c] = g.lex_leading();
      g = g * c.inverse();
    }
    return g;
  }

  /// p-th root in characteristic p (all exponents divisible by p, coefficient roots).
  std::optional<MPoly> pth_root(long p) const {
    if (p <= 0) throw std::domain_error("pth_root needs positive characteristic");
    MPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
      Exponents e2(nvars_);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (e[i] % p != 0) return std::nullopt;
        e2[i] = e[i] / static_cast<unsigned>(p);
      }
      r.terms_.emplace(e2, c.pth_root());
    }
    // Verify (the coefficient root is always exact on GF(p), but stay defensive for
    // future coefficient types).
    if (r.pow(static_cast<unsigned long>(p)) != *this) return std::nullopt;
    return r;
  }

  /// Exact k-th root for k invertible in the coefficient field (Newton-style lift on
  /// the leading variable). Requires C::kth_root for the constant case.
  std::optional<MPoly> kth_root(unsigned long k) const {
    if (k == 0) throw std::domain_error("0th root");
    if (k == 1 || is_zero()) return *this;
    if (is_constant()) {
      auto rc = terms_.begin()->second.kth_root(k);
      if (!rc) return std::nullopt;
      return MPoly(nvars_, *rc);
    }
    long var = -1;
    for (long i = static_cast<long>(nvars_) - 1; i >= 0; --i)
      if (degree_in(i) > 0) { var = i; break; }
    std::size_t v = static_cast<std::size_t>(var);
    long d = degree_in(v);
    if (d % static_cast<long>(k) != 0) return std::nullopt;
    unsigned long m = static_cast<unsigned long>(d) / k;
    auto cs = univariate_in(v);
    auto lead = cs.back().kth_root(k);
    if (!lead) return std::nullopt;
    MPoly g = *lead * monomial_unit(nvars_, v, m, lead->terms().begin()->second.one_like());
    // Divisor for the next-coefficient extraction: k * lead^{k-1}.
    C kc = lead->terms().begin()->second.one_like();
    C acc = kc.zero_like();
    for (unsigned long i = 0; i < k; ++i) acc = acc + kc;
    if (acc.is_zero()) return std::nullopt;  // k not invertible here
    MPoly divisor = lead->pow(k - 1) * acc;
    for (long i = static_cast<long>(m) - 1; i >= 0; --i) {
      MPoly t = *this - g.pow(k);
      if (t.is_zero()) break;
      long dt = t.degree_in(v);
      long target = static_cast<long>((k - 1) * m) + i;
      if (dt > target) return std::nullopt;
      if (dt < target) continue;
      MPoly coeff = t.univariate_in(v)[static_cast<std::size_t>(dt)];
      auto gi = coeff.divided_by(divisor);
      if (!gi) return std::nullopt;
      g = g + *gi * monomial_unit(nvars_, v, static_cast<unsigned long>(i),
                                  lead->terms().begin()->second.one_like());
    }
    if (g.pow(k) != *this) return std::nullopt;
    return g;
  }

 private:
  static MPoly monomial_unit(std::size_t nvars, std::size_t var, unsigned long e, const C& one) {
    Exponents ex(nvars, 0);
    ex[var] = static_cast<unsigned>(e);
    return monomial(nvars, ex, one);
  }

  static void terms_check(const Exponents& e, std::size_t n) {
    if (e.size() != n) throw std::logic_error("exponent arity mismatch");
  }
  void require_same(const MPoly& o) const {
    if (nvars_ != o.nvars_) throw std::logic_error("polynomial arity mismatch");
  }

  /// Strip content (in var) and scale the lex-leading coefficient to 1. Used inside
  /// the gcd remainder sequence, where unit and content factors are irrelevant; the
  /// scaling keeps rational coefficients from exploding.
  static MPoly gcd_normalized(const MPoly& f, std::size_t var) {
    if (f.is_zero()) return f;
    MPoly r = f;
    MPoly c = content_in(r, var);
    if (!c.is_constant()) r = *r.divided_by(c);
    r = r * r.lex_leading().second.inverse();
    return r;
  }

  /// Pseudo-remainder of f by g, both viewed as univariate in var (deg_var(g) >= 1),
  /// normalized after every step; exact only up to content and units.
  static MPoly prem(const MPoly& f, const MPoly& g, std::size_t var) {
    long df = f.degree_in(var);
    long dg = g.degree_in(var);
    if (dg < 1) throw std::logic_error("prem: divisor constant in main variable");
    auto gc = g.univariate_in(var);
    MPoly lg = gc.back();
    MPoly r = f;
    while (!r.is_zero() && (df = r.degree_in(var)) >= dg) {
      auto rc = r.univariate_in(var);
      MPoly lr = rc.back();
      Exponents shift(f.nvars(), 0);
      shift[var] = static_cast<unsigned>(df - dg);
      MPoly mono = monomial(f.nvars(), shift, lr.terms().begin()->second.one_like());
      r = r * lg - g * lr * mono;
      r = gcd_normalized(r, var);
    }
    return r;
  }

  static MPoly content_in(const MPoly& f, std::size_t var) {
    auto cs = f.univariate_in(var);
    MPoly c(f.nvars());
    for (const auto& ci : cs) c = gcd_raw(c, ci);
    return c;
  }

  static MPoly gcd_raw(const MPoly& a, const MPoly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    std::size_t n = a.nvars();
    long var = -1;
    for (long i = static_cast<long>(n) - 1; i >= 0; --i)
      if (a.degree_in(i) > 0 || b.degree_in(i) > 0) { var = i; break; }
    if (var < 0) return MPoly(n, a.terms().begin()->second.one_like());
    std::size_t v = static_cast<std::size_t>(var);
    if (a.degree_in(v) == 0) return gcd_raw(content_in(b, v), a);
    if (b.degree_in(v) == 0) return gcd_raw(content_in(a, v), b);

    MPoly ca = content_in(a, v), cb = content_in(b, v);
    MPoly d = gcd_raw(ca, cb);
    MPoly f = *a.divided_by(ca);
    MPoly g = *b.divided_by(cb);
    if (f.degree_in(v) < g.degree_in(v)) std::swap(f, g);
    while (!g.is_zero() && g.degree_in(v) > 0) {
      MPoly r = prem(f, g, v);
      f = g;
      if (r.is_zero()) { g = r; break; }
      MPoly cr = content_in(r, v);
      g = *r.divided_by(cr);
    }
    if (!g.is_zero())  // nonzero remainder constant in v: primitive parts are coprime
      return d;
    MPoly cf = content_in(f, v);
    return d * *f.divided_by(cf);
  }

  std::size_t nvars_;
  TermMap terms_;
};

}  // namespace formkit
