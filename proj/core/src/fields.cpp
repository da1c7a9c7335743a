#include "formkit/fields.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace formkit {
namespace {

bool is_prime_long(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool valid_ident(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c));
  });
}

std::vector<unsigned> padded_exponents(const std::vector<unsigned>& e, std::size_t n) {
  std::vector<unsigned> r = e;
  if (r.size() > n) throw std::logic_error("exponent vector too long for tower");
  r.resize(n, 0);
  return r;
}

RawCoords embed_raw(const RawCoords& c, std::size_t nvars) {
  RawCoords out;
  for (const auto& [e, v] : c) out.emplace(e, v.embedded(nvars));
  return out;
}

bool raw_equal(const RawCoords& a, const RawCoords& b, std::size_t gens, std::size_t nvars) {
  RawCoords na, nb;
  for (const auto& [e, v] : a)
    if (!v.is_zero()) na.emplace(padded_exponents(e, gens), v.embedded(nvars));
  for (const auto& [e, v] : b)
    if (!v.is_zero()) nb.emplace(padded_exponents(e, gens), v.embedded(nvars));
  return na == nb;
}

/// Gaussian elimination over the rational-function field. Solves A x = b for any one
/// solution (free unknowns set to zero); nullopt when inconsistent.
std::optional<std::vector<RatFunc>> solve_linear(std::vector<std::vector<RatFunc>> A,
                                                 std::vector<RatFunc> b, std::size_t ncols,
                                                 const RatFunc& zero) {
  std::size_t rows = A.size();
  std::vector<long> pivot_col(rows, -1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < ncols && rank < rows; ++col) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (!A[r][col].is_zero()) { piv = r; break; }
    if (piv == rows) continue;
    std::swap(A[rank], A[piv]);
    std::swap(b[rank], b[piv]);
    RatFunc inv = A[rank][col].inverse();
    for (std::size_t c = col; c < ncols; ++c) A[rank][c] = A[rank][c] * inv;
    b[rank] = b[rank] * inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || A[r][col].is_zero()) continue;
      RatFunc f = A[r][col];
      for (std::size_t c = col; c < ncols; ++c) A[r][c] = A[r][c] - f * A[rank][c];
      b[r] = b[r] - f * b[rank];
    }
    pivot_col[rank] = static_cast<long>(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r)
    if (!b[r].is_zero()) return std::nullopt;
  std::vector<RatFunc> x(ncols, zero);
  for (std::size_t r = 0; r < rank; ++r) x[static_cast<std::size_t>(pivot_col[r])] = b[r];
  return x;
}

std::size_t matrix_rank(std::vector<std::vector<RatFunc>> A, std::size_t ncols) {
  std::size_t rows = A.size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < ncols && rank < rows; ++col) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (!A[r][col].is_zero()) { piv = r; break; }
    if (piv == rows) continue;
    std::swap(A[rank], A[piv]);
    RatFunc inv = A[rank][col].inverse();
    for (std::size_t c = col; c < ncols; ++c) A[rank][c] = A[rank][c] * inv;
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (A[r][col].is_zero()) continue;
      RatFunc f = A[r][col];
      for (std::size_t c = col; c < ncols; ++c) A[r][c] = A[r][c] - f * A[rank][c];
    }
    ++rank;
  }
  return rank;
}

// ---- dense univariate polynomials over a tower, for irreducibility testing ----

using UPoly = std::vector<FieldElem>;  // little-endian coefficients

void utrim(UPoly& f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
}

UPoly usub(const UPoly& a, const UPoly& b, const FieldElem& zero) {
  UPoly r(std::max(a.size(), b.size()), zero);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = r[i] + a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] - b[i];
  utrim(r);
  return r;
}

UPoly umul(const UPoly& a, const UPoly& b, const FieldElem& zero) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, zero);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  utrim(r);
  return r;
}

/// Remainder of a by monic-leading b.
UPoly urem(UPoly a, const UPoly& b, [[maybe_unused]] const FieldElem& zero) {
  utrim(a);
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  FieldElem lead_inv = b.back().inverse();
  while (a.size() >= b.size()) {
    FieldElem f = a.back() * lead_inv;
    std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[off + i] = a[off + i] - f * b[i];
    utrim(a);
    if (a.size() > off + b.size() - 1) throw std::logic_error("remainder failed to shrink");
  }
  return a;
}

UPoly upowmod(UPoly base, mpz_class e, const UPoly& mod, const FieldElem& zero,
              const FieldElem& one) {
  UPoly acc{one};
  base = urem(std::move(base), mod, zero);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = urem(umul(acc, base, zero), mod, zero);
    e >>= 1;
    if (e > 0) base = urem(umul(base, base, zero), mod, zero);
  }
  return acc;
}

UPoly ugcd(UPoly a, UPoly b, const FieldElem& zero) {
  utrim(a);
  utrim(b);
  while (!b.empty()) {
    UPoly r = urem(a, b, zero);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    FieldElem inv = a.back().inverse();
    for (auto& c : a) c = c * inv;
  }
  return a;
}

std::vector<unsigned long> prime_factors(unsigned long n) {
  std::vector<unsigned long> out;
  for (unsigned long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Rabin's irreducibility test over a finite tower K: monic f of degree d is
/// irreducible iff x^{|K|^d} = x (mod f) and gcd(x^{|K|^{d/l}} - x, f) = 1 for each
/// prime l | d.
bool rabin_irreducible(const UPoly& f, unsigned long field_order, const FieldElem& zero,
                       const FieldElem& one) {
  std::size_t d = f.size() - 1;
  if (d == 0) return false;
  if (d == 1) return true;
  mpz_class N(static_cast<unsigned long>(field_order));
  UPoly x{zero, one};
  mpz_class Nd;
  mpz_pow_ui(Nd.get_mpz_t(), N.get_mpz_t(), static_cast<unsigned long>(d));
  if (usub(upowmod(x, Nd, f, zero, one), x, zero) != UPoly{}) return false;
  for (unsigned long l : prime_factors(d)) {
    mpz_class Ne;
    mpz_pow_ui(Ne.get_mpz_t(), N.get_mpz_t(), static_cast<unsigned long>(d / l));
    UPoly g = ugcd(usub(upowmod(x, Ne, f, zero, one), x, zero), f, zero);
    if (g.size() != 1) return false;
  }
  return true;
}

// ---- factor search over the plain rationals (Kronecker interpolation) ----

std::vector<mpz_class> divisors_signed(const mpz_class& v) {
  std::vector<mpz_class> out;
  mpz_class a = abs(v);
  for (mpz_class d = 1; d * d <= a; ++d) {
    if (a % d == 0) {
      out.push_back(d);
      out.push_back(-d);
      mpz_class e = a / d;
      if (e != d) {
        out.push_back(e);
        out.push_back(-e);
      }
    }
  }
  return out;
}

/// Decide irreducibility of a primitive integer polynomial (degree >= 1, nonzero
/// constant term) over the rationals by searching for a factor of degree <= deg/2
/// through Kronecker interpolation on small integer points. Throws FieldError when
/// the divisor search exceeds the budget.
bool rational_irreducible(std::vector<mpz_class> f) {
  std::size_t d = f.size() - 1;
  if (d == 1) return true;
  // Rational root test covers linear factors (and fully decides d <= 3).
  for (const mpz_class& num : divisors_signed(f[0])) {
    for (const mpz_class& den : divisors_signed(f.back())) {
      if (den <= 0) continue;
      if (gcd(abs(num), den) != 1) continue;
      // f(num/den) * den^d
      mpz_class acc = 0, npow = 1;
      std::vector<mpz_class> dpow(d + 1);
      dpow[d] = 1;
      for (std::size_t i = d; i-- > 0;) dpow[i] = dpow[i + 1] * den;
      for (std::size_t i = 0; i <= d; ++i) {
        acc += f[i] * npow * dpow[i];
        npow *= num;
      }
      if (acc == 0) return false;
    }
  }
  if (d <= 3) return true;
  auto eval = [&](long x) {
    mpz_class acc = 0, xp = 1;
    for (std::size_t i = 0; i <= d; ++i) {
      acc += f[i] * xp;
      xp *= x;
    }
    return acc;
  };
  constexpr std::size_t kBudget = 2000000;
  std::size_t work = 0;
  for (std::size_t k = 2; k <= d / 2; ++k) {
    // Candidate factor g of degree k from values at x = 0..k (g(x) | f(x)).
    std::vector<std::vector<mpz_class>> choices;
    std::size_t combos = 1;
    for (std::size_t x = 0; x <= k; ++x) {
      mpz_class v = eval(static_cast<long>(x));
      if (v == 0) return false;  // integer root missed above only if x out of divisor set
      choices.push_back(divisors_signed(v));
      combos *= choices.back().size();
      if (combos > kBudget) throw FieldError("irreducibility search budget exceeded");
    }
    std::vector<std::size_t> idx(k + 1, 0);
    while (true) {
      work++;
      if (work > kBudget) throw FieldError("irreducibility search budget exceeded");
      // Lagrange-interpolate candidate values at 0..k; keep integer candidates.
      std::vector<mpq_class> g(k + 1, mpq_class(0));
      for (std::size_t i = 0; i <= k; ++i) {
        // basis polynomial for node i over nodes 0..k
        std::vector<mpq_class> basis{mpq_class(1)};
        mpq_class denom(1);
        for (std::size_t j = 0; j <= k; ++j) {
          if (j == i) continue;
          std::vector<mpq_class> nb(basis.size() + 1, mpq_class(0));
          for (std::size_t t = 0; t < basis.size(); ++t) {
            nb[t + 1] += basis[t];
            nb[t] -= mpq_class(static_cast<long>(j)) * basis[t];
          }
          basis = std::move(nb);
          denom *= mpq_class(static_cast<long>(i)) - mpq_class(static_cast<long>(j));
        }
        mpq_class scale = mpq_class(choices[i][idx[i]]) / denom;
        for (std::size_t t = 0; t < basis.size(); ++t) g[t] += scale * basis[t];
      }
      bool integral = true;
      std::vector<mpz_class> gi(k + 1);
      for (std::size_t t = 0; t <= k; ++t) {
        mpq_class v = g[t];
        v.canonicalize();
        if (v.get_den() != 1) { integral = false; break; }
        gi[t] = v.get_num();
      }
      if (integral && gi[k] != 0) {
        // trial divide f by gi over the rationals; gi is a factor iff remainder is zero
        std::vector<mpq_class> rem(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) rem[i] = mpq_class(f[i]);
        while (rem.size() >= gi.size()) {
          mpq_class c = rem.back() / mpq_class(gi[k]);
          std::size_t off = rem.size() - gi.size();
          for (std::size_t i2 = 0; i2 <= k; ++i2) rem[off + i2] -= c * mpq_class(gi[i2]);
          while (!rem.empty() && rem.back() == 0) rem.pop_back();
          if (rem.size() > off + k) throw std::logic_error("trial division failed to shrink");
        }
        if (rem.empty()) return false;  // genuine factor of degree k
      }
      // next combination
      std::size_t pos = 0;
      while (pos <= k) {
        if (++idx[pos] < choices[pos].size()) break;
        idx[pos] = 0;
        ++pos;
      }
      if (pos > k) break;
    }
  }
  return true;
}

std::string unique_root_name(const std::string& base, const Field& K) {
  std::string name = base + "r";
  while (K.has_generator(name)) name += "x";
  return name;
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldElem
// ---------------------------------------------------------------------------

FieldElem::FieldElem(FieldPtr field, RawCoords coords)
    : field_(std::move(field)) {
  std::size_t n = field_->algs_.size();
  for (auto& [e, v] : coords) {
    if (v.is_zero()) continue;
    if (v.nvars() != field_->trans_.size() || v.characteristic() != field_->p_)
      throw std::logic_error("coordinate does not match tower base");
    auto pe = padded_exponents(e, n);
    auto it = coords_.find(pe);
    if (it == coords_.end())
      coords_.emplace(pe, v);
    else {
      it->second = it->second + v;
      if (it->second.is_zero()) coords_.erase(it);
    }
  }
  reduce();
}

void FieldElem::reduce() {
  const auto& algs = field_->algs_;
  std::size_t n = algs.size();
  std::vector<std::pair<std::vector<unsigned>, RatFunc>> work;
  for (auto& [e, c] : coords_) work.emplace_back(e, c);
  coords_.clear();
  while (!work.empty()) {
    auto [e, c] = std::move(work.back());
    work.pop_back();
    if (c.is_zero()) continue;
    long hit = -1;
    for (long i = static_cast<long>(n) - 1; i >= 0; --i)
      if (e[static_cast<std::size_t>(i)] >= algs[static_cast<std::size_t>(i)].degree) {
        hit = i;
        break;
      }
    if (hit < 0) {
      auto it = coords_.find(e);
      if (it == coords_.end())
        coords_.emplace(e, c);
      else {
        it->second = it->second + c;
        if (it->second.is_zero()) coords_.erase(it);
      }
      continue;
    }
    const auto& layer = algs[static_cast<std::size_t>(hit)];
    auto e2 = e;
    e2[static_cast<std::size_t>(hit)] -= layer.degree;
    for (const auto& [re, rc] : layer.rewrite) {
      auto e3 = e2;
      for (std::size_t j = 0; j < re.size(); ++j) e3[j] += re[j];
      work.emplace_back(std::move(e3), c * rc);
    }
  }
}

bool FieldElem::is_one() const {
  if (coords_.size() != 1) return false;
  const auto& [e, c] = *coords_.begin();
  return c.is_one() && std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
}

bool FieldElem::is_rational_base() const {
  for (const auto& [e, c] : coords_)
    for (unsigned x : e)
      if (x != 0) return false;
  return true;
}

RatFunc FieldElem::rational_value() const {
  if (!is_rational_base()) throw std::logic_error("element leaves the rational base");
  if (coords_.empty()) return RatFunc(field_->p_, field_->trans_.size());
  return coords_.begin()->second;
}

FieldElem FieldElem::zero_like() const { return field_->zero(); }
FieldElem FieldElem::one_like() const { return field_->one(); }

static void require_compatible(const FieldElem& a, const FieldElem& b) {
  if (!Field::compatible(a.field(), b.field()))
    throw std::logic_error("field tower mismatch");
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  require_compatible(*this, o);
  FieldElem r = *this;
  for (const auto& [e, c] : o.coords_) {
    auto it = r.coords_.find(e);
    if (it == r.coords_.end())
      r.coords_.emplace(e, c);
    else {
      it->second = it->second + c;
      if (it->second.is_zero()) r.coords_.erase(it);
    }
  }
  return r;
}

FieldElem FieldElem::operator-(const FieldElem& o) const { return *this + (-o); }

FieldElem FieldElem::operator-() const {
  FieldElem r = *this;
  for (auto& [e, c] : r.coords_) c = -c;
  return r;
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
  require_compatible(*this, o);
  FieldElem r;
  r.field_ = field_;
  std::size_t n = field_->algs_.size();
  for (const auto& [e1, c1] : coords_)
    for (const auto& [e2, c2] : o.coords_) {
      std::vector<unsigned> e(n);
      for (std::size_t i = 0; i < n; ++i) e[i] = e1[i] + e2[i];
      RatFunc c = c1 * c2;
      auto it = r.coords_.find(e);
      if (it == r.coords_.end()) {
        if (!c.is_zero()) r.coords_.emplace(std::move(e), c);
      } else {
        it->second = it->second + c;
        if (it->second.is_zero()) r.coords_.erase(it);
      }
    }
  r.reduce();
  return r;
}

FieldElem FieldElem::pow(unsigned long e) const {
  FieldElem acc = one_like();
  FieldElem base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return acc;
}

FieldElem FieldElem::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero tower element");
  if (is_rational_base()) {
    RawCoords c;
    c.emplace(std::vector<unsigned>(field_->algs_.size(), 0), rational_value().inverse());
    return FieldElem(field_, std::move(c));
  }
  auto basis = field_->basis_exponents();
  std::size_t D = basis.size();
  std::map<std::vector<unsigned>, std::size_t> index;
  for (std::size_t i = 0; i < D; ++i) index.emplace(basis[i], i);
  RatFunc zero(field_->p_, field_->trans_.size());
  std::vector<std::vector<RatFunc>> M(D, std::vector<RatFunc>(D, zero));
  for (std::size_t j = 0; j < D; ++j) {
    RawCoords bc;
    bc.emplace(basis[j], zero.one_like());
    FieldElem col = *this * FieldElem(field_, std::move(bc));
    for (const auto& [e, c] : col.coords()) M[index.at(e)][j] = c;
  }
  std::vector<RatFunc> rhs(D, zero);
  rhs[index.at(std::vector<unsigned>(field_->algs_.size(), 0))] = zero.one_like();
  auto sol = solve_linear(std::move(M), std::move(rhs), D, zero);
  if (!sol) throw std::logic_error("tower inverse failed; relations are inconsistent");
  RawCoords rc;
  for (std::size_t j = 0; j < D; ++j)
    if (!(*sol)[j].is_zero()) rc.emplace(basis[j], (*sol)[j]);
  FieldElem inv(field_, std::move(rc));
  if (!(inv * *this).is_one()) throw std::logic_error("tower inverse verification failed");
  return inv;
}

bool FieldElem::operator==(const FieldElem& o) const {
  require_compatible(*this, o);
  return coords_ == o.coords_;
}

bool FieldElem::operator<(const FieldElem& o) const {
  require_compatible(*this, o);
  return coords_ < o.coords_;
}

FieldElem FieldElem::embed_into(const FieldPtr& target) const {
  if (Field::compatible(field_, target)) {
    if (field_.get() == target.get()) return *this;
    FieldElem r = *this;
    r.field_ = target;
    return r;
  }
  if (!target->extends(*field_))
    throw std::logic_error("target tower does not extend the element's field");
  RawCoords rc;
  for (const auto& [e, c] : coords_)
    rc.emplace(padded_exponents(e, target->algebraic_layers().size()),
               c.embedded(target->transcendentals().size()));
  return FieldElem(target, std::move(rc));
}

FieldElem FieldElem::restrict_to(const FieldPtr& target) const {
  if (Field::compatible(field_, target)) {
    FieldElem r = *this;
    r.field_ = target;
    return r;
  }
  if (!field_->extends(*target))
    throw std::logic_error("restriction target is not a subtower");
  std::size_t gens = target->algebraic_layers().size();
  std::size_t nv = target->transcendentals().size();
  RawCoords rc;
  for (const auto& [e, c] : coords_) {
    for (std::size_t i = gens; i < e.size(); ++i)
      if (e[i] != 0) throw std::logic_error("element leaves the subtower");
    for (std::size_t v = nv; v < c.nvars(); ++v)
      if (c.num().degree_in(v) > 0 || c.den().degree_in(v) > 0)
        throw std::logic_error("element leaves the subtower");
    // shrink the rational function to the subtower's variables
    auto shrink = [&](const MPoly<Scalar>& f) {
      MPoly<Scalar> out(nv);
      for (const auto& [fe, fc] : f.terms()) {
        std::vector<unsigned> fe2(fe.begin(), fe.begin() + static_cast<long>(nv));
        out.add_term(fe2, fc);
      }
      return out;
    };
    std::vector<unsigned> e2(e.begin(), e.begin() + static_cast<long>(gens));
    rc.emplace(std::move(e2), RatFunc(field_->p_, shrink(c.num()), shrink(c.den())));
  }
  return FieldElem(target, std::move(rc));
}

std::string FieldElem::str() const {
  if (coords_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = coords_.rbegin(); it != coords_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += field_->algs_[i].name;
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    std::string cs = c.str(field_->trans_);
    if (!first) os << " + ";
    first = false;
    if (mono.empty()) {
      os << cs;
    } else if (cs == "1") {
      os << mono;
    } else {
      bool wrap = cs.find('+') != std::string::npos || cs.find('-') != std::string::npos;
      os << (wrap ? "(" + cs + ")" : cs) << "*" << mono;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Field construction
// ---------------------------------------------------------------------------

FieldPtr Field::rationals() {
  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = 0;
  f->spec_ = "QQ";
  return f;
}

FieldPtr Field::prime_field(long p) {
  if (!is_prime_long(p)) throw FieldError("characteristic must be prime: " + std::to_string(p));
  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = p;
  f->spec_ = "GF(" + std::to_string(p) + ")";
  return f;
}

FieldPtr Field::with_transcendental(const FieldPtr& base, const std::string& name) {
  if (!valid_ident(name)) throw FieldError("invalid generator name: " + name);
  if (base->has_generator(name)) throw FieldError("generator name already used: " + name);
  auto f = std::shared_ptr<Field>(new Field(*base));
  f->trans_.push_back(name);
  std::size_t nv = f->trans_.size();
  for (auto& layer : f->algs_) {
    layer.rewrite = embed_raw(layer.rewrite, nv);
    for (auto& c : layer.minpoly) c = embed_raw(c, nv);
  }
  f->layers_.push_back({LayerInfo::Kind::Transcendental, name, ""});
  if (!f->layers_.empty() && f->layers_.size() >= 2 &&
      f->layers_[f->layers_.size() - 2].kind == LayerInfo::Kind::Transcendental &&
      !f->spec_.empty() && f->spec_.back() == ')') {
    f->spec_.back() = ',';
    f->spec_ += name + ")";
  } else {
    f->spec_ += "(" + name + ")";
  }
  return f;
}

FieldPtr Field::with_algebraic(const FieldPtr& base, const std::string& gen,
                               const std::vector<FieldElem>& minpoly_coeffs) {
  if (!valid_ident(gen)) throw FieldError("invalid generator name: " + gen);
  if (base->has_generator(gen)) throw FieldError("generator name already used: " + gen);
  if (minpoly_coeffs.size() < 3)
    throw FieldError("algebraic layer needs a minimal polynomial of degree >= 2");
  for (const auto& c : minpoly_coeffs)
    if (!Field::compatible(c.field(), base))
      throw FieldError("minimal polynomial coefficients must live in the base tower");
  unsigned d = static_cast<unsigned>(minpoly_coeffs.size() - 1);
  if (minpoly_coeffs.back().is_zero())
    throw FieldError("leading minimal polynomial coefficient vanishes");
  FieldElem lead_inv = minpoly_coeffs.back().inverse();
  std::vector<FieldElem> monic;
  for (unsigned i = 0; i < d; ++i) monic.push_back(minpoly_coeffs[i] * lead_inv);

  // --- irreducibility over the base tower ---
  long p = base->characteristic();
  bool binomial = true;
  for (unsigned i = 1; i < d; ++i)
    if (!monic[i].is_zero()) binomial = false;
  bool p_power_degree = false;
  if (p > 0) {
    unsigned long dd = d;
    while (dd % static_cast<unsigned long>(p) == 0) dd /= static_cast<unsigned long>(p);
    p_power_degree = (dd == 1);
  }
  unsigned pth_power = 0;
  if (binomial && p_power_degree) {
    // x^{p^k} - a is irreducible exactly when a is not a p-th power.
    FieldElem a = -monic[0];
    if (is_qth_power(a, static_cast<unsigned long>(p)))
      throw FieldError("reducible: the root target is already a p-th power");
    pth_power = d;
  } else if (auto order = base->finite_order()) {
    UPoly f = monic;
    f.push_back(base->one());
    if (!rabin_irreducible(f, *order, base->zero(), base->one()))
      throw FieldError("reducible minimal polynomial over the finite tower");
  } else if (p == 0 && base->is_prime_field()) {
    // clear denominators to a primitive integer polynomial
    mpz_class lcm_den = 1;
    std::vector<mpq_class> qs;
    for (unsigned i = 0; i < d; ++i) qs.push_back(monic[i].rational_value()
                                                       .num().constant_term(Scalar(0)).rational());
    qs.push_back(mpq_class(1));
    for (auto& q : qs) lcm_den = lcm(lcm_den, q.get_den());
    std::vector<mpz_class> zs;
    for (auto& q : qs) {
      mpq_class v = q * mpq_class(lcm_den);
      v.canonicalize();
      zs.push_back(v.get_num());
    }
    if (zs[0] == 0) throw FieldError("reducible: zero constant term");
    if (!rational_irreducible(zs)) throw FieldError("reducible minimal polynomial");
  } else if (d == 2 && p != 2) {
    // x^2 + bx + c irreducible iff b^2 - 4c is not a square in the base.
    FieldElem four = base->from_integer(4);
    FieldElem disc = monic[1] * monic[1] - four * monic[0];
    SqrtResult s = sqrt_in_field(disc);
    if (s.status == SqrtResult::Status::Found)
      throw FieldError("reducible: discriminant is a square");
    if (s.status == SqrtResult::Status::Unknown)
      throw FieldError("cannot verify irreducibility for this tower shape");
  } else {
    throw FieldError("cannot verify irreducibility for this tower shape");
  }

  auto f = std::shared_ptr<Field>(new Field(*base));
  AlgLayer layer;
  layer.name = gen;
  layer.degree = d;
  layer.from_pth_root = pth_power != 0 && binomial;
  layer.pth_power = layer.from_pth_root ? pth_power : 0;
  std::size_t n = base->algs_.size();
  for (unsigned i = 0; i < d; ++i) {
    RawCoords ci;
    for (const auto& [e, v] : monic[i].coords()) ci.emplace(padded_exponents(e, n), v);
    layer.minpoly.push_back(ci);
    // g^d = -(c_0 + c_1 g + ... + c_{d-1} g^{d-1})
    for (const auto& [e, v] : monic[i].coords()) {
      auto e2 = padded_exponents(e, n + 1);
      e2[n] = i;
      layer.rewrite.emplace(std::move(e2), -v);
    }
  }
  // printable relation
  std::ostringstream detail;
  detail << gen << "^" << d;
  for (unsigned i = d; i-- > 0;) {
    FieldElem c = monic[i];
    if (c.is_zero()) continue;
    detail << " + ";
    std::string cs = c.str();
    bool wrap = cs.find('+') != std::string::npos || cs.find('-') != std::string::npos ||
                cs.find('/') != std::string::npos;
    if (i == 0) {
      detail << (wrap ? "(" + cs + ")" : cs);
    } else {
      if (cs == "1") {
        detail << gen;
      } else {
        detail << (wrap ? "(" + cs + ")" : cs) << "*" << gen;
      }
      if (i > 1) detail << "^" << i;
    }
  }
  f->algs_.push_back(std::move(layer));
  f->layers_.push_back({LayerInfo::Kind::Algebraic, gen, detail.str()});
  f->spec_ += "[" + gen + "]/(" + detail.str() + ")";
  return f;
}

FieldPtr Field::with_pth_root(const FieldPtr& base, const std::string& gen,
                              const FieldElem& target, unsigned q) {
  long p = base->characteristic();
  if (p <= 0) throw FieldError("p-th root layers need positive characteristic");
  unsigned long qq = q;
  if (qq < 2) throw FieldError("root order must be at least p");
  while (qq % static_cast<unsigned long>(p) == 0) qq /= static_cast<unsigned long>(p);
  if (qq != 1) throw FieldError("root order must be a power of the characteristic");
  std::vector<FieldElem> coeffs;
  coeffs.push_back(-target);
  for (unsigned i = 1; i < q; ++i) coeffs.push_back(base->zero());
  coeffs.push_back(base->one());
  FieldPtr f = with_algebraic(base, gen, coeffs);
  auto g = std::const_pointer_cast<Field>(f);
  g->layers_.back().kind = LayerInfo::Kind::PthRoot;
  return f;
}

FieldPtr Field::with_pth_root_layer(const FieldPtr& base, unsigned q) {
  long p = base->characteristic();
  if (p <= 0) throw FieldError("p-th root layers need positive characteristic");
  unsigned long k = 0, qq = q;
  while (qq % static_cast<unsigned long>(p) == 0) {
    qq /= static_cast<unsigned long>(p);
    ++k;
  }
  if (qq != 1 || k == 0) throw FieldError("root order must be a power of the characteristic");
  FieldPtr cur = base;
  for (unsigned long round = 0; round < k; ++round) {
    std::vector<std::string> gens = cur->generator_names();
    for (const auto& name : gens) {
      FieldElem g = cur->generator(name);
      if (is_qth_power(g, static_cast<unsigned long>(p))) continue;
      cur = with_pth_root(cur, unique_root_name(name, *cur), g,
                          static_cast<unsigned>(p));
    }
  }
  auto f = std::shared_ptr<Field>(new Field(*cur));
  f->spec_ = base->spec_string() + "^(1/" + std::to_string(q) + ")";
  return f;
}

// ---------------------------------------------------------------------------
// Field queries
// ---------------------------------------------------------------------------

std::optional<unsigned long> Field::finite_order() const {
  if (p_ == 0 || !trans_.empty()) return std::nullopt;
  unsigned long order = 1;
  for (unsigned long i = 0; i < algebraic_dimension(); ++i) {
    if (order > (1ul << 62) / static_cast<unsigned long>(p_))
      throw FieldError("finite tower too large to enumerate");
    order *= static_cast<unsigned long>(p_);
  }
  return order;
}

unsigned long Field::algebraic_dimension() const {
  unsigned long d = 1;
  for (const auto& a : algs_) d *= a.degree;
  return d;
}

bool Field::same_as(const Field& o) const {
  if (p_ != o.p_ || trans_ != o.trans_ || algs_.size() != o.algs_.size()) return false;
  for (std::size_t i = 0; i < algs_.size(); ++i) {
    const auto& a = algs_[i];
    const auto& b = o.algs_[i];
    if (a.name != b.name || a.degree != b.degree) return false;
    if (!raw_equal(a.rewrite, b.rewrite, i + 1, trans_.size())) return false;
  }
  return true;
}

bool Field::extends(const Field& k) const {
  if (p_ != k.p_) return false;
  if (k.trans_.size() > trans_.size() || k.algs_.size() > algs_.size()) return false;
  if (!std::equal(k.trans_.begin(), k.trans_.end(), trans_.begin())) return false;
  std::size_t nv = std::max(trans_.size(), k.trans_.size());
  for (std::size_t i = 0; i < k.algs_.size(); ++i) {
    const auto& a = algs_[i];
    const auto& b = k.algs_[i];
    if (a.name != b.name || a.degree != b.degree) return false;
    if (!raw_equal(a.rewrite, b.rewrite, i + 1, nv)) return false;
  }
  return true;
}

std::optional<unsigned long> Field::degree_over(const Field& k) const {
  if (!extends(k)) return std::nullopt;
  if (trans_.size() != k.trans_.size()) return std::nullopt;  // transcendental: infinite
  unsigned long e = 1;
  for (std::size_t i = k.algs_.size(); i < algs_.size(); ++i) e *= algs_[i].degree;
  return e;
}

FieldElem Field::zero() const { return FieldElem(shared_from_this(), {}); }

FieldElem Field::one() const { return from_integer(1); }

FieldElem Field::from_integer(long v) const { return from_scalar(Scalar(p_, v)); }

FieldElem Field::from_scalar(const Scalar& s) const {
  if (s.characteristic() != p_) throw std::logic_error("scalar characteristic mismatch");
  RawCoords c;
  if (!s.is_zero())
    c.emplace(std::vector<unsigned>(algs_.size(), 0), RatFunc(p_, trans_.size(), s));
  return FieldElem(shared_from_this(), std::move(c));
}

bool Field::has_generator(const std::string& name) const {
  if (std::find(trans_.begin(), trans_.end(), name) != trans_.end()) return true;
  for (const auto& a : algs_)
    if (a.name == name) return true;
  return false;
}

std::vector<std::string> Field::generator_names() const {
  std::vector<std::string> out = trans_;
  for (const auto& a : algs_) out.push_back(a.name);
  return out;
}

FieldElem Field::generator(const std::string& name) const {
  for (std::size_t i = 0; i < trans_.size(); ++i) {
    if (trans_[i] == name) {
      RawCoords c;
      c.emplace(std::vector<unsigned>(algs_.size(), 0),
                RatFunc::variable(p_, trans_.size(), i));
      return FieldElem(shared_from_this(), std::move(c));
    }
  }
  for (std::size_t i = 0; i < algs_.size(); ++i) {
    if (algs_[i].name == name) {
      std::vector<unsigned> e(algs_.size(), 0);
      e[i] = 1;
      RawCoords c;
      c.emplace(std::move(e), RatFunc(p_, trans_.size(), Scalar(p_, 1)));
      return FieldElem(shared_from_this(), std::move(c));
    }
  }
  throw FieldError("unknown generator: " + name);
}

std::vector<std::vector<unsigned>> Field::basis_exponents() const {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(algs_.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    for (; i < algs_.size(); ++i) {
      if (++cur[i] < algs_[i].degree) break;
      cur[i] = 0;
    }
    if (i == algs_.size()) break;
  }
  if (algs_.empty()) out.assign(1, {});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FieldElem> Field::enumerate_elements() const {
  auto order = finite_order();
  if (!order) throw FieldError("tower is not finite");
  auto basis = basis_exponents();
  std::size_t D = basis.size();
  std::vector<FieldElem> out;
  out.reserve(*order);
  std::vector<long> digits(D, 0);
  while (true) {
    RawCoords c;
    for (std::size_t i = 0; i < D; ++i)
      if (digits[i] != 0) c.emplace(basis[i], RatFunc(p_, 0, Scalar(p_, digits[i])));
    out.push_back(FieldElem(shared_from_this(), std::move(c)));
    std::size_t i = 0;
    for (; i < D; ++i) {
      if (++digits[i] < p_) break;
      digits[i] = 0;
    }
    if (i == D) break;
  }
  return out;
}

std::vector<FieldElem> Field::basis_frobenius() const {
  auto basis = basis_exponents();
  std::vector<FieldElem> out;
  RatFunc one(p_, trans_.size(), Scalar(p_, 1));
  for (const auto& e : basis) {
    RawCoords c;
    c.emplace(e, one);
    out.push_back(FieldElem(shared_from_this(), std::move(c))
                      .pow(static_cast<unsigned long>(p_)));
  }
  return out;
}

namespace {

/// Rows of the Frobenius component matrix: key (basis index, residue class) ->
/// column values over F. Shared by the p-degree rank and p-th root solver.
using FrobRowKey = std::pair<std::size_t, std::vector<unsigned>>;

std::map<FrobRowKey, std::vector<RatFunc>> frobenius_rows(
    const std::vector<std::vector<unsigned>>& basis, const std::vector<FieldElem>& frob,
    const RatFunc& zero) {
  std::map<std::vector<unsigned>, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
  std::map<FrobRowKey, std::vector<RatFunc>> rows;
  for (std::size_t j = 0; j < frob.size(); ++j) {
    for (const auto& [e, v] : frob[j].coords()) {
      std::size_t k = index.at(e);
      for (const auto& [alpha, beta] : v.frobenius_components()) {
        auto it = rows.find({k, alpha});
        if (it == rows.end())
          it = rows.emplace(FrobRowKey{k, alpha},
                            std::vector<RatFunc>(frob.size(), zero)).first;
        it->second[j] = beta;
      }
    }
  }
  return rows;
}

std::optional<FieldElem> pth_root_elem(const FieldElem& x) {
  const FieldPtr& K = x.field();
  long p = K->characteristic();
  auto basis = K->basis_exponents();
  std::map<std::vector<unsigned>, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
  RatFunc zero(p, K->transcendentals().size());
  std::vector<FieldElem> fr;
  RatFunc one = zero.one_like();
  for (const auto& e : basis) {
    RawCoords c;
    c.emplace(e, one);
    fr.push_back(FieldElem(K, std::move(c)).pow(static_cast<unsigned long>(p)));
  }
  auto rows = frobenius_rows(basis, fr, zero);
  // Right-hand side components; add rows present only on the right.
  std::map<FrobRowKey, RatFunc> rhs;
  for (const auto& [e, v] : x.coords()) {
    std::size_t k = index.at(e);
    for (const auto& [alpha, xi] : v.frobenius_components()) {
      rhs.emplace(FrobRowKey{k, alpha}, xi);
      if (!rows.count({k, alpha}))
        rows.emplace(FrobRowKey{k, alpha}, std::vector<RatFunc>(basis.size(), zero));
    }
  }
  std::vector<std::vector<RatFunc>> A;
  std::vector<RatFunc> b;
  for (auto& [key, row] : rows) {
    A.push_back(row);
    auto it = rhs.find(key);
    b.push_back(it == rhs.end() ? zero : it->second);
  }
  auto sol = solve_linear(std::move(A), std::move(b), basis.size(), zero);
  if (!sol) return std::nullopt;
  RawCoords rc;
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (!(*sol)[j].is_zero()) rc.emplace(basis[j], (*sol)[j]);
  FieldElem y(K, std::move(rc));
  if (y.pow(static_cast<unsigned long>(p)) != x) return std::nullopt;
  return y;
}

}  // namespace

std::pair<long, unsigned long> Field::p_degree() const {
  if (p_ == 0) return {0, 1};
  auto basis = basis_exponents();
  RatFunc zero(p_, trans_.size());
  auto fr = basis_frobenius();
  auto rows = frobenius_rows(basis, fr, zero);
  std::vector<std::vector<RatFunc>> A;
  for (auto& kv : rows) A.push_back(kv.second);
  std::size_t r = matrix_rank(std::move(A), basis.size());
  unsigned long pm = 1;
  for (std::size_t i = 0; i < trans_.size(); ++i) pm *= static_cast<unsigned long>(p_);
  unsigned long total = pm * static_cast<unsigned long>(basis.size());
  if (r == 0 || total % r != 0)
    throw std::logic_error("inconsistent Frobenius rank");
  return {p_, total / r};
}

FieldPtr Field::without_top_algebraic() const {
  if (algs_.empty()) throw FieldError("no algebraic layer to drop");
  auto f = std::shared_ptr<Field>(new Field(*this));
  f->algs_.pop_back();
  for (std::size_t i = f->layers_.size(); i-- > 0;) {
    if (f->layers_[i].kind != LayerInfo::Kind::Transcendental) {
      f->layers_.erase(f->layers_.begin() + static_cast<long>(i));
      break;
    }
  }
  // regenerate the printable spec from the remaining layers
  std::ostringstream os;
  os << (p_ == 0 ? std::string("QQ") : "GF(" + std::to_string(p_) + ")");
  for (std::size_t i = 0; i < f->layers_.size(); ++i) {
    const auto& l = f->layers_[i];
    if (l.kind == LayerInfo::Kind::Transcendental) {
      std::string seq = l.name;
      while (i + 1 < f->layers_.size() &&
             f->layers_[i + 1].kind == LayerInfo::Kind::Transcendental) {
        ++i;
        seq += "," + f->layers_[i].name;
      }
      os << "(" << seq << ")";
    } else {
      os << "[" << l.name << "]/(" << l.detail << ")";
    }
  }
  f->spec_ = os.str();
  return f;
}

// ---------------------------------------------------------------------------
// q-th powers, square roots, degree bound
// ---------------------------------------------------------------------------

std::optional<FieldElem> is_qth_power(const FieldElem& x, unsigned long q) {
  if (q == 0) throw FieldError("root order must be positive");
  if (q == 1) return x;
  long p = x.field()->characteristic();
  if (p <= 0) throw FieldError("q-th power test needs q to be a power of the characteristic");
  unsigned long k = 0, qq = q;
  while (qq % static_cast<unsigned long>(p) == 0) {
    qq /= static_cast<unsigned long>(p);
    ++k;
  }
  if (qq != 1) throw FieldError("root order must be a power of the characteristic");
  FieldElem y = x;
  for (unsigned long i = 0; i < k; ++i) {
    auto r = pth_root_elem(y);
    if (!r) return std::nullopt;
    y = *r;
  }
  return y;
}

unsigned long lift_degree_bound(unsigned long d, unsigned long q, unsigned long c, long p) {
  if (q == 1) return d;
  if (p <= 0) throw FieldError("degree bound needs q to be a power of the characteristic");
  unsigned long k = 0, qq = q;
  while (qq % static_cast<unsigned long>(p) == 0) {
    qq /= static_cast<unsigned long>(p);
    ++k;
  }
  if (qq != 1) throw FieldError("q must be a power of the characteristic");
  unsigned long e = d;
  for (unsigned long i = 0; i < k; ++i) {
    if (c != 0 && e > (1ul << 62) / c) throw FieldError("degree bound overflow");
    e *= c;
  }
  return e;
}

namespace {

/// Split x over the top quadratic layer: x = x0 + x1*g with x0, x1 in the subtower.
std::pair<FieldElem, FieldElem> split_top(const FieldElem& x, const FieldPtr& sub) {
  std::size_t top = x.field()->algebraic_layers().size() - 1;
  RawCoords c0, c1;
  for (const auto& [e, v] : x.coords()) {
    auto e2 = e;
    unsigned ge = e2[top];
    e2[top] = 0;
    (ge == 0 ? c0 : c1).emplace(std::move(e2), v);
  }
  FieldElem x0(x.field(), std::move(c0));
  FieldElem x1(x.field(), std::move(c1));
  return {x0.restrict_to(sub), x1.restrict_to(sub)};
}

}  // namespace

SqrtResult sqrt_in_field(const FieldElem& x) {
  const FieldPtr& K = x.field();
  long p = K->characteristic();
  if (x.is_zero()) return {SqrtResult::Status::Found, K->zero()};
  if (p == 2) {
    auto r = is_qth_power(x, 2);
    if (r) return {SqrtResult::Status::Found, *r};
    return {SqrtResult::Status::NotASquare, std::nullopt};
  }
  if (K->algebraic_layers().empty()) {
    auto r = x.rational_value().kth_root(2);
    if (!r) return {SqrtResult::Status::NotASquare, std::nullopt};
    RawCoords c;
    c.emplace(std::vector<unsigned>{}, *r);
    return {SqrtResult::Status::Found, FieldElem(K, std::move(c))};
  }
  const auto& top = K->algebraic_layers().back();
  if (top.degree != 2) return {SqrtResult::Status::Unknown, std::nullopt};
  FieldPtr K0 = K->without_top_algebraic();
  auto [x0, x1] = split_top(x, K0);
  // g^2 = alpha*g + beta from the rewrite rule
  std::size_t nsub = K0->algebraic_layers().size();
  RawCoords ac, bc;
  for (const auto& [e, v] : top.rewrite) {
    auto e2 = padded_exponents(e, nsub + 1);
    unsigned ge = e2[nsub];
    e2.resize(nsub);
    (ge == 0 ? bc : ac).emplace(std::move(e2), v.embedded(K0->transcendentals().size()));
  }
  FieldElem alpha(K0, std::move(ac));
  FieldElem beta(K0, std::move(bc));
  FieldElem two = K0->from_integer(2);
  FieldElem four = K0->from_integer(4);
  auto lift = [&](const FieldElem& u, const FieldElem& v) {
    FieldElem z = u.embed_into(K) + v.embed_into(K) * K->generator(top.name);
    return z;
  };
  bool saw_unknown = false;
  if (x1.is_zero()) {
    SqrtResult s0 = sqrt_in_field(x0);
    if (s0.status == SqrtResult::Status::Found)
      return {SqrtResult::Status::Found, s0.root->embed_into(K)};
    if (s0.status == SqrtResult::Status::Unknown) saw_unknown = true;
    // z = u + v*g with u = -alpha*v/2: x0 = v^2 * (alpha^2/4 + beta)
    FieldElem gamma = alpha * alpha / four + beta;
    SqrtResult sv = sqrt_in_field(x0 / gamma);
    if (sv.status == SqrtResult::Status::Found) {
      FieldElem v = *sv.root;
      FieldElem u = -(alpha * v) / two;
      FieldElem z = lift(u, v);
      if (z * z == x) return {SqrtResult::Status::Found, z};
    }
    if (sv.status == SqrtResult::Status::Unknown) saw_unknown = true;
    return {saw_unknown ? SqrtResult::Status::Unknown : SqrtResult::Status::NotASquare,
            std::nullopt};
  }
  // z = u + v*g, v != 0: w = v^2 solves  A w^2 + B w + C = 0 with
  // A = alpha^2 + 4 beta (nonzero: the layer discriminant), B = -(2 alpha x1 + 4 x0),
  // C = x1^2.
  FieldElem A = alpha * alpha + four * beta;
  FieldElem B = -(two * alpha * x1 + four * x0);
  FieldElem C = x1 * x1;
  SqrtResult sd = sqrt_in_field(B * B - four * A * C);
  if (sd.status == SqrtResult::Status::Unknown) return {SqrtResult::Status::Unknown, std::nullopt};
  if (sd.status == SqrtResult::Status::NotASquare)
    return {SqrtResult::Status::NotASquare, std::nullopt};
  for (int sign = 0; sign < 2; ++sign) {
    FieldElem w = (-B + (sign == 0 ? *sd.root : -*sd.root)) / (two * A);
    if (w.is_zero()) continue;
    SqrtResult sv = sqrt_in_field(w);
    if (sv.status == SqrtResult::Status::Unknown) saw_unknown = true;
    if (sv.status != SqrtResult::Status::Found) continue;
    FieldElem v = *sv.root;
    FieldElem u = (x1 - alpha * w) / (two * v);
    FieldElem z = lift(u, v);
    if (z * z == x) return {SqrtResult::Status::Found, z};
  }
  return {saw_unknown ? SqrtResult::Status::Unknown : SqrtResult::Status::NotASquare,
          std::nullopt};
}

}  // namespace formkit
