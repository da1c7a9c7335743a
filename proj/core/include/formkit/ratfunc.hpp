#pragma once

#include <optional>
#include <string>

#include "formkit/mpoly.hpp"
#include "formkit/scalar.hpp"

namespace formkit {

/// Element of the rational function field F = P(t_1,...,t_m) over a prime field P.
/// Stored as a gcd-reduced fraction with the denominator's lex-leading coefficient
/// normalized to 1, which makes representations canonical.
class RatFunc {
 public:
  using P = MPoly<Scalar>;

  RatFunc() : p_(0), nvars_(0), num_(0), den_(0) {}
  RatFunc(long p, std::size_t nvars)
      : p_(p), nvars_(nvars), num_(nvars), den_(nvars, Scalar(p, 1)) {}
  RatFunc(long p, std::size_t nvars, const Scalar& c)
      : p_(p), nvars_(nvars), num_(nvars, c), den_(nvars, Scalar(p, 1)) {}
  RatFunc(long p, const P& num, const P& den) : p_(p), nvars_(num.nvars()), num_(num), den_(den) {
    normalize();
  }

  static RatFunc variable(long p, std::size_t nvars, std::size_t idx) {
    return RatFunc(p, P::variable(nvars, idx, Scalar(p, 1)), P(nvars, Scalar(p, 1)));
  }

  long characteristic() const { return p_; }
  std::size_t nvars() const { return nvars_; }
  const P& num() const { return num_; }
  const P& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }
  bool is_polynomial() const { return den_.is_constant(); }

  RatFunc zero_like() const { return RatFunc(p_, nvars_); }
  RatFunc one_like() const { return RatFunc(p_, nvars_, Scalar(p_, 1)); }

  RatFunc operator+(const RatFunc& o) const {
    require_same(o);
    return RatFunc(p_, num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  RatFunc operator-(const RatFunc& o) const {
    require_same(o);
    return RatFunc(p_, num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  RatFunc operator*(const RatFunc& o) const {
    require_same(o);
    return RatFunc(p_, num_ * o.num_, den_ * o.den_);
  }
  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }
  RatFunc inverse() const {
    if (is_zero()) throw std::domain_error("division by zero rational function");
    return RatFunc(p_, den_, num_);
  }
  RatFunc operator/(const RatFunc& o) const { return *this * o.inverse(); }

  bool operator==(const RatFunc& o) const {
    return p_ == o.p_ && num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }
  bool operator<(const RatFunc& o) const {
    if (num_ != o.num_) return num_ < o.num_;
    return den_ < o.den_;
  }

  RatFunc pow(unsigned long e) const {
    RatFunc acc = one_like();
    RatFunc b = *this;
    while (e) {
      if (e & 1) acc = acc * b;
      b = b * b;
      e >>= 1;
    }
    return acc;
  }

  /// Re-embed into a rational function field with more variables (appended).
  RatFunc embedded(std::size_t new_nvars) const {
    RatFunc r = *this;
    r.nvars_ = new_nvars;
    r.num_ = num_.padded(new_nvars);
    r.den_ = den_.padded(new_nvars);
    return r;
  }

  /// Exact k-th root when one exists and k is invertible (or a unit situation applies).
  /// Canonical reduced fractions make this a num/den root: f = (a/b)^k with b monic
  /// forces num = a^k, den = b^k.
  std::optional<RatFunc> kth_root(unsigned long k) const {
    auto rn = num_.kth_root(k);
    if (!rn) return std::nullopt;
    auto rd = den_.kth_root(k);
    if (!rd) return std::nullopt;
    return RatFunc(p_, *rn, *rd);
  }

  /// p-th root within F, when it exists (characteristic p only).
  std::optional<RatFunc> frobenius_root() const {
    if (p_ <= 0) throw std::domain_error("frobenius_root needs positive characteristic");
    auto rn = num_.pth_root(p_);
    if (!rn) return std::nullopt;
    auto rd = den_.pth_root(p_);
    if (!rd) return std::nullopt;
    return RatFunc(p_, *rn, *rd);
  }

  /// Decompose f = sum_alpha t^alpha * f_alpha with f_alpha in F^p, returning the map
  /// alpha (residues mod p) -> frobenius_root(f_alpha) in F. Exact in characteristic p.
  std::map<std::vector<unsigned>, RatFunc> frobenius_components() const {
    if (p_ <= 0) throw std::domain_error("frobenius_components needs positive characteristic");
    unsigned up = static_cast<unsigned>(p_);
    // f = num/den = (num * den^{p-1}) / den^p; den^p is in F^p with root den.
    P a = num_ * den_.pow(up - 1);
    std::map<std::vector<unsigned>, P> buckets;
    for (const auto& [e, c] : a.terms()) {
      std::vector<unsigned> res(nvars_), quo(nvars_);
      for (std::size_t i = 0; i < nvars_; ++i) {
        res[i] = e[i] % up;
        quo[i] = e[i] / up;
      }
      auto it = buckets.find(res);
      if (it == buckets.end()) it = buckets.emplace(res, P(nvars_)).first;
      it->second.add_term(quo, c.pth_root());
    }
    std::map<std::vector<unsigned>, RatFunc> out;
    for (auto& [res, poly] : buckets)
      out.emplace(res, RatFunc(p_, poly, den_));
    return out;
  }

  std::string str(const std::vector<std::string>& var_names) const;

 private:
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("zero denominator");
    nvars_ = num_.nvars();
    if (num_.is_zero()) {
      den_ = P(nvars_, Scalar(p_, 1));
      return;
    }
    P g = P::gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = *num_.divided_by(g);
      den_ = *den_.divided_by(g);
    }
    Scalar lc = den_.lex_leading().second;
    if (!lc.is_one()) {
      Scalar inv = lc.inverse();
      num_ = num_ * inv;
      den_ = den_ * inv;
    }
  }
  void require_same(const RatFunc& o) const {
    if (p_ != o.p_ || nvars_ != o.nvars_) throw std::logic_error("rational function field mismatch");
  }

  long p_;
  std::size_t nvars_;
  P num_, den_;
};

}  // namespace formkit
