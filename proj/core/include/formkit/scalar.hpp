#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace formkit {

/// Element of a prime field: the rationals (characteristic 0) or GF(p).
class Scalar {
 public:
  Scalar() : p_(0), r_(0) {}
  explicit Scalar(long p) : p_(p), r_(0) { check_char(p); }
  Scalar(long p, long value) : p_(p) {
    check_char(p);
    if (p == 0) {
      q_ = value;
    } else {
      r_ = value % p;
      if (r_ < 0) r_ += p;
    }
  }
  Scalar(long p, const mpq_class& value) : p_(p) {
    check_char(p);
    if (p == 0) {
      q_ = value;
      q_.canonicalize();
    } else {
      mpz_class num = value.get_num() % p;
      mpz_class den = value.get_den() % p;
      long n = num.get_si();
      long d = den.get_si();
      if (d % p == 0) throw std::domain_error("denominator divisible by characteristic");
      r_ = mod(n * inv_mod(d));
    }
  }

  long characteristic() const { return p_; }
  bool is_zero() const { return p_ == 0 ? q_ == 0 : r_ == 0; }
  bool is_one() const { return p_ == 0 ? q_ == 1 : r_ == 1; }

  Scalar zero_like() const { return Scalar(p_); }
  Scalar one_like() const { return Scalar(p_, 1); }

  Scalar operator+(const Scalar& o) const {
    require_same(o);
    Scalar s(p_);
    if (p_ == 0) s.q_ = q_ + o.q_; else s.r_ = mod(r_ + o.r_);
    return s;
  }
  Scalar operator-(const Scalar& o) const {
    require_same(o);
    Scalar s(p_);
    if (p_ == 0) s.q_ = q_ - o.q_; else s.r_ = mod(r_ - o.r_);
    return s;
  }
  Scalar operator*(const Scalar& o) const {
    require_same(o);
    Scalar s(p_);
    if (p_ == 0) s.q_ = q_ * o.q_; else s.r_ = mod(r_ * o.r_);
    return s;
  }
  Scalar operator-() const {
    Scalar s(p_);
    if (p_ == 0) s.q_ = -q_; else s.r_ = mod(-r_);
    return s;
  }
  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    Scalar s(p_);
    if (p_ == 0) s.q_ = 1 / q_; else s.r_ = inv_mod(r_);
    return s;
  }
  Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

  Scalar pow(unsigned long e) const {
    Scalar acc = one_like();
    Scalar base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  /// Inverse Frobenius. Trivial on GF(p) (x^p = x); identity in characteristic 0.
  Scalar pth_root() const { return *this; }

  /// Exact k-th root when one exists. Over the rationals this takes integer roots of
  /// numerator and denominator; over GF(p) it searches the (small) residue range.
  std::optional<Scalar> kth_root(unsigned long k) const {
    if (k == 0) throw std::domain_error("0th root");
    if (k == 1 || is_zero()) return *this;
    if (p_ == 0) {
      mpz_class num = q_.get_num(), den = q_.get_den();
      bool neg = num < 0;
      if (neg) {
        if (k % 2 == 0) return std::nullopt;
        num = -num;
      }
      mpz_class rn, rd;
      if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k)) return std::nullopt;
      if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k)) return std::nullopt;
      if (neg) rn = -rn;
      Scalar s(0);
      s.q_ = mpq_class(rn, rd);
      s.q_.canonicalize();
      return s;
    }
    for (long v = 0; v < p_; ++v) {
      if (Scalar(p_, v).pow(k).r_ == r_) return Scalar(p_, v);
    }
    return std::nullopt;
  }

  bool operator==(const Scalar& o) const {
    return p_ == o.p_ && (p_ == 0 ? q_ == o.q_ : r_ == o.r_);
  }
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  bool operator<(const Scalar& o) const {
    require_same(o);
    return p_ == 0 ? q_ < o.q_ : r_ < o.r_;
  }

  const mpq_class& rational() const { return q_; }
  long residue() const { return r_; }

  std::string str() const {
    if (p_ == 0) return q_.get_str();
    return std::to_string(r_);
  }

 private:
  static void check_char(long p) {
    if (p < 0) throw std::domain_error("negative characteristic");
  }
  void require_same(const Scalar& o) const {
    if (p_ != o.p_) throw std::logic_error("scalar characteristic mismatch");
  }
  long mod(long v) const {
    long r = v % p_;
    return r < 0 ? r + p_ : r;
  }
  long inv_mod(long a) const {
    long t = 0, nt = 1, r = p_, nr = mod(a);
    while (nr != 0) {
      long q = r / nr;
      long tmp = t - q * nt; t = nt; nt = tmp;
      tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (r != 1) throw std::domain_error("not invertible mod p");
    return t < 0 ? t + p_ : t;
  }

  long p_;
  mpq_class q_;
  long r_;
};

}  // namespace formkit
