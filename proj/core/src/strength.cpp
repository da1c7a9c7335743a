#include "formkit/strength.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <numeric>

namespace formkit {

namespace {

using Exp = std::vector<unsigned>;

unsigned long sat_mul(unsigned long a, unsigned long b) {
  if (a == 0 || b == 0) return 0;
  if (a > ULONG_MAX / b) return ULONG_MAX;
  return a * b;
}

unsigned long binom_ul(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  unsigned long r = 1;
  for (unsigned long i = 1; i <= k; ++i) {
    r = sat_mul(r, n - k + i);
    if (r == ULONG_MAX) return r;
    r /= i;
  }
  return r;
}

Poly lift_poly(const Poly& f, const FieldPtr& L) {
  auto R = make_ring(L, f.ring()->vars);
  return f.coefficients_into(R);
}

}  // namespace

Form::Form(Poly f) : f_(std::move(f)) {
  if (f_.is_zero()) return;
  if (!f_.is_homogeneous()) throw StrengthError("forms must be homogeneous");
  d_ = f_.total_degree();
  if (d_ < 2) throw StrengthError("forms must have degree at least 2");
}

std::vector<Exp> monomials_of(long degree, std::size_t nvars) {
  std::vector<Exp> out;
  if (nvars == 0) {
    if (degree == 0) out.push_back({});
    return out;
  }
  Exp cur(nvars, 0);
  cur[0] = static_cast<unsigned>(degree);
  while (true) {
    out.push_back(cur);
    std::size_t k = nvars;
    for (std::size_t i = nvars - 1; i-- > 0;)
      if (cur[i] > 0) {
        k = i;
        break;
      }
    if (k == nvars) break;
    unsigned rest = 0;
    for (std::size_t i = k + 1; i < nvars; ++i) {
      rest += cur[i];
      cur[i] = 0;
    }
    --cur[k];
    cur[k + 1] = rest + 1;
  }
  return out;
}

DegreePattern DegreePattern::make(long d, std::vector<long> lows) {
  DegreePattern p;
  for (long e : lows) {
    long lo = std::min(e, d - e), hi = std::max(e, d - e);
    if (lo < 1) throw StrengthError("factor degrees must be between 1 and d-1");
    p.pairs.emplace_back(lo, hi);
  }
  std::sort(p.pairs.begin(), p.pairs.end());
  return p;
}

std::string DegreePattern::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) s += ", ";
    s += "(" + std::to_string(pairs[i].first) + "," + std::to_string(pairs[i].second) + ")";
  }
  return s + "}";
}

std::vector<DegreePattern> patterns_for(long d, std::size_t s, std::size_t nvars) {
  std::vector<DegreePattern> out;
  std::vector<long> lows;
  // non-decreasing sequences of s values in [1, d/2]
  std::function<void(long)> rec = [&](long from) {
    if (lows.size() == s) {
      out.push_back(DegreePattern::make(d, lows));
      return;
    }
    for (long e = from; 2 * e <= d; ++e) {
      lows.push_back(e);
      rec(e);
      lows.pop_back();
    }
  };
  rec(1);
  auto unknowns = [&](const DegreePattern& p) {
    unsigned long u = 0;
    for (auto [lo, hi] : p.pairs)
      u += binom_ul(static_cast<unsigned long>(lo) + nvars - 1, nvars - 1) +
           binom_ul(static_cast<unsigned long>(hi) + nvars - 1, nvars - 1);
    return u;
  };
  std::stable_sort(out.begin(), out.end(), [&](const DegreePattern& a, const DegreePattern& b) {
    unsigned long ua = unknowns(a), ub = unknowns(b);
    if (ua != ub) return ua < ub;
    return a < b;
  });
  return out;
}

ThetaSystem theta_system(const Form& f, std::size_t s, const DegreePattern& pattern) {
  if (pattern.pairs.size() != s)
    throw StrengthError("pattern size does not match the summand count");
  const FieldPtr& K = f.ring()->field;
  std::size_t n = f.nvars();
  long d = f.is_zero() ? 2 : f.degree();

  ThetaSystem sys;
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < s; ++i) {
    auto [lo, hi] = pattern.pairs[i];
    ThetaSystem::Factor g{lo, {}}, h{hi, {}};
    for (std::size_t k = 0; k < monomials_of(lo, n).size(); ++k)
      g.coeff_vars.push_back("a" + std::to_string(i + 1) + "_" + std::to_string(k));
    for (std::size_t k = 0; k < monomials_of(hi, n).size(); ++k)
      h.coeff_vars.push_back("b" + std::to_string(i + 1) + "_" + std::to_string(k));
    vars.insert(vars.end(), g.coeff_vars.begin(), g.coeff_vars.end());
    vars.insert(vars.end(), h.coeff_vars.begin(), h.coeff_vars.end());
    sys.summands.emplace_back(std::move(g), std::move(h));
  }
  sys.unknowns = make_ring(K, vars);

  std::map<Exp, Poly> eq;  // degree-d monomial -> accumulated coefficient expression
  for (const auto& m : monomials_of(d, n)) eq.emplace(m, Poly(sys.unknowns));
  for (const auto& [g, h] : sys.summands) {
    auto gm = monomials_of(g.degree, n);
    auto hm = monomials_of(h.degree, n);
    for (std::size_t a = 0; a < gm.size(); ++a)
      for (std::size_t b = 0; b < hm.size(); ++b) {
        Exp m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = gm[a][i] + hm[b][i];
        eq.at(m) = eq.at(m) + Poly::variable(sys.unknowns, g.coeff_vars[a]) *
                                  Poly::variable(sys.unknowns, h.coeff_vars[b]);
      }
  }
  for (const auto& m : monomials_of(d, n)) {
    Poly e = eq.at(m);
    auto it = f.poly().terms().find(m);
    if (it != f.poly().terms().end()) e = e - Poly::constant(sys.unknowns, it->second);
    sys.equations.push_back(e);
  }
  return sys;
}

bool witness_matches(const Form& f, const Witness& w) {
  Poly acc(f.ring());
  for (const auto& [g, h] : w) acc = acc + g * h;
  return acc == f.poly();
}

unsigned long quadratic_rank(const Form& f) {
  if (f.is_zero()) return 0;
  if (f.degree() != 2) throw StrengthError("rank is defined for quadratic forms");
  const FieldPtr& K = f.ring()->field;
  if (K->characteristic() == 2)
    throw StrengthError("the Gram matrix needs characteristic different from 2");
  std::size_t n = f.nvars();
  FieldElem half = K->from_integer(2).inverse();
  std::vector<std::vector<FieldElem>> G(n, std::vector<FieldElem>(n, K->zero()));
  for (const auto& [e, c] : f.poly().terms()) {
    std::vector<std::size_t> sup;
    for (std::size_t i = 0; i < n; ++i)
      if (e[i] > 0) sup.push_back(i);
    if (sup.size() == 1) {
      G[sup[0]][sup[0]] = c;
    } else {
      G[sup[0]][sup[1]] = c * half;
      G[sup[1]][sup[0]] = c * half;
    }
  }
  unsigned long rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t pr = row;
    while (pr < n && G[pr][col].is_zero()) ++pr;
    if (pr == n) continue;
    std::swap(G[pr], G[row]);
    FieldElem inv = G[row][col].inverse();
    for (std::size_t j = 0; j < n; ++j) G[row][j] = G[row][j] * inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || G[i][col].is_zero()) continue;
      FieldElem fct = G[i][col];
      for (std::size_t j = 0; j < n; ++j) G[i][j] = G[i][j] - fct * G[row][j];
    }
    ++row;
    ++rank;
  }
  return rank;
}

namespace {

/// f = Σ_i x_i h_i grouping every term under its first occurring variable.
Witness split_witness(const Form& f) {
  std::map<std::size_t, Poly> groups;
  std::size_t n = f.nvars();
  for (const auto& [e, c] : f.poly().terms()) {
    std::size_t lead = 0;
    while (lead < n && e[lead] == 0) ++lead;
    Exp rest = e;
    --rest[lead];
    auto it = groups.find(lead);
    if (it == groups.end()) it = groups.emplace(lead, Poly(f.ring())).first;
    it->second.add_term(rest, c);
  }
  Witness w;
  for (const auto& [i, h] : groups)
    w.emplace_back(Poly::variable(f.ring(), f.ring()->vars[i]), h);
  return w;
}

/// f = g^p when every exponent is divisible by p and every coefficient has a p-th
/// root; then f = g * g^{p-1} has strength 1.
std::optional<Witness> frobenius_collapse(const Form& f) {
  long p = f.ring()->field->characteristic();
  if (p == 0 || f.is_zero() || f.degree() % p != 0) return std::nullopt;
  Poly g(f.ring());
  for (const auto& [e, c] : f.poly().terms()) {
    Exp e2 = e;
    for (auto& x : e2) {
      if (x % static_cast<unsigned>(p) != 0) return std::nullopt;
      x /= static_cast<unsigned>(p);
    }
    auto r = is_qth_power(c, static_cast<unsigned long>(p));
    if (!r) return std::nullopt;
    g.add_term(e2, *r);
  }
  Witness w;
  w.emplace_back(g, g.pow(static_cast<unsigned long>(p) - 1));
  return w;
}

struct DiagTerm {
  std::size_t var;
  FieldElem coeff;
};

std::optional<std::vector<DiagTerm>> diagonal_quadratic(const Form& f) {
  if (f.is_zero() || f.degree() != 2) return std::nullopt;
  std::vector<DiagTerm> out;
  for (const auto& [e, c] : f.poly().terms()) {
    std::size_t var = 0;
    bool diag = false;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] == 2) {
        var = i;
        diag = true;
      } else if (e[i] != 0) {
        return std::nullopt;
      }
    if (!diag) return std::nullopt;
    out.push_back({var, c});
  }
  return out;
}

enum class Str1 { Feasible, Refuted, Unknown };

struct Str1Result {
  Str1 status;
  Witness witness;
};

/// Decide str(f) = 1 over the base field for diagonal quadratics.
Str1Result str1_diagonal(const Form& f, const std::vector<DiagTerm>& diag) {
  const PolyRingPtr& R = f.ring();
  const FieldPtr& K = R->field;
  auto xv = [&](std::size_t i) { return Poly::variable(R, R->vars[i]); };
  if (diag.size() == 1) {
    Witness w;
    w.emplace_back(xv(diag[0].var) * diag[0].coeff, xv(diag[0].var));
    return {Str1::Feasible, w};
  }
  if (K->characteristic() == 2) {
    // a product of two linear forms with zero cross terms is c*(linear)^2 here,
    // so f = g h forces every ratio a_i/a_1 to be a square in K
    Poly ell = xv(diag[0].var);
    for (std::size_t i = 1; i < diag.size(); ++i) {
      auto root = is_qth_power(diag[i].coeff / diag[0].coeff, 2);
      if (!root) return {Str1::Refuted, {}};
      ell = ell + xv(diag[i].var) * *root;
    }
    Witness w;
    w.emplace_back(ell * diag[0].coeff, ell);
    return {Str1::Feasible, w};
  }
  if (diag.size() >= 3) return {Str1::Refuted, {}};  // rank >= 3: even astr >= 2
  auto sq = sqrt_in_field(-(diag[1].coeff / diag[0].coeff));
  if (sq.status == SqrtResult::Status::Found) {
    Witness w;
    Poly l1 = (xv(diag[0].var) + xv(diag[1].var) * *sq.root) * diag[0].coeff;
    Poly l2 = xv(diag[0].var) - xv(diag[1].var) * *sq.root;
    w.emplace_back(l1, l2);
    return {Str1::Feasible, w};
  }
  if (sq.status == SqrtResult::Status::NotASquare) return {Str1::Refuted, {}};
  return {Str1::Unknown, {}};
}

Witness best_upper_witness(const Form& f) {
  if (auto fc = frobenius_collapse(f)) return *fc;
  if (auto diag = diagonal_quadratic(f)) {
    auto s1 = str1_diagonal(f, *diag);
    if (s1.status == Str1::Feasible) return s1.witness;
  }
  return split_witness(f);
}

// ---- finite-field enumeration ----------------------------------------------

struct EnumCtx {
  const SmallField& F;
  std::size_t n;
  long d;
  std::map<long, std::vector<Exp>> mons;
  std::map<Exp, std::size_t> row_of;
  std::map<long, std::vector<std::vector<uint8_t>>> cands;  // projective factor lists

  EnumCtx(const SmallField& F_, std::size_t n_, long d_) : F(F_), n(n_), d(d_) {
    for (long e = 1; e <= d; ++e) mons[e] = monomials_of(e, n);
    auto md = monomials_of(d, n);
    for (std::size_t i = 0; i < md.size(); ++i) row_of.emplace(md[i], i);
  }

  unsigned long cand_count(long e) {
    std::size_t M = mons.at(e).size();
    unsigned long total = 0, pw = 1;
    for (std::size_t l = 0; l < M; ++l) {
      total += pw == ULONG_MAX ? ULONG_MAX - total : pw;
      pw = sat_mul(pw, F.order());
      if (total == ULONG_MAX) break;
    }
    return total;  // (q^M - 1)/(q - 1)
  }

  const std::vector<std::vector<uint8_t>>& candidates(long e) {
    auto it = cands.find(e);
    if (it != cands.end()) return it->second;
    std::size_t M = mons.at(e).size();
    std::vector<std::vector<uint8_t>> list;
    for (std::size_t lead = 0; lead < M; ++lead) {
      std::vector<uint8_t> v(M, 0);
      v[lead] = 1;
      while (true) {
        list.push_back(v);
        std::size_t j = M;
        for (std::size_t i = M; i-- > lead + 1;)
          if (v[i] + 1u < F.order()) {
            j = i;
            break;
          }
        if (j == M) break;
        ++v[j];
        for (std::size_t i = j + 1; i < M; ++i) v[i] = 0;
      }
    }
    return cands.emplace(e, std::move(list)).first->second;
  }

  Poly to_poly(const std::vector<uint8_t>& v, long e, const PolyRingPtr& R) const {
    Poly g(R);
    const auto& ms = mons.at(e);
    for (std::size_t i = 0; i < ms.size(); ++i)
      if (v[i] != 0) g.add_term(ms[i], F.element(v[i]));
    return g;
  }
};

/// Number of factor tuples for a pattern: combinations with repetition inside each
/// group of equal pairs, products across groups.
unsigned long tuple_count(EnumCtx& ctx, const DegreePattern& p) {
  unsigned long total = 1;
  std::size_t i = 0;
  while (i < p.pairs.size()) {
    std::size_t j = i;
    while (j < p.pairs.size() && p.pairs[j] == p.pairs[i]) ++j;
    unsigned long c = ctx.cand_count(p.pairs[i].first);
    total = sat_mul(total, binom_ul(c + (j - i) - 1, j - i));
    i = j;
  }
  return total;
}

/// Search one pattern exhaustively; returns a verified witness if f = Σ g_i h_i
/// has a solution with this pattern.
std::optional<Witness> search_pattern(EnumCtx& ctx, const Form& f, const DegreePattern& p) {
  const PolyRingPtr& R = f.ring();
  std::size_t s = p.pairs.size();
  std::size_t rows = ctx.row_of.size();
  std::vector<std::size_t> hsz(s), hoff(s + 1, 0);
  for (std::size_t i = 0; i < s; ++i) {
    hsz[i] = ctx.mons.at(p.pairs[i].second).size();
    hoff[i + 1] = hoff[i] + hsz[i];
  }
  std::size_t cols = hoff[s];

  std::vector<uint8_t> b(rows, 0);
  for (const auto& [e, c] : f.poly().terms()) b[ctx.row_of.at(e)] = ctx.F.index_of(c);

  std::vector<std::size_t> pick(s, 0);
  std::optional<Witness> found;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (found) return;
    if (i == s) {
      std::vector<uint8_t> A(rows * cols, 0);
      for (std::size_t k = 0; k < s; ++k) {
        const auto& g = ctx.candidates(p.pairs[k].first)[pick[k]];
        const auto& gm = ctx.mons.at(p.pairs[k].first);
        const auto& hm = ctx.mons.at(p.pairs[k].second);
        for (std::size_t a = 0; a < gm.size(); ++a) {
          if (g[a] == 0) continue;
          for (std::size_t bb = 0; bb < hm.size(); ++bb) {
            Exp m(ctx.n);
            for (std::size_t t = 0; t < ctx.n; ++t) m[t] = gm[a][t] + hm[bb][t];
            std::size_t row = ctx.row_of.at(m);
            uint8_t& slot = A[row * cols + hoff[k] + bb];
            slot = ctx.F.add(slot, g[a]);
          }
        }
      }
      auto sol = small_solve(ctx.F, std::move(A), rows, cols, b);
      if (!sol) return;
      Witness w;
      for (std::size_t k = 0; k < s; ++k) {
        Poly g = ctx.to_poly(ctx.candidates(p.pairs[k].first)[pick[k]], p.pairs[k].first, R);
        std::vector<uint8_t> hv(sol->begin() + static_cast<long>(hoff[k]),
                                sol->begin() + static_cast<long>(hoff[k + 1]));
        Poly h = ctx.to_poly(hv, p.pairs[k].second, R);
        w.emplace_back(g, h);
      }
      if (!witness_matches(f, w)) throw std::logic_error("enumerated witness failed to verify");
      found = std::move(w);
      return;
    }
    std::size_t from = (i > 0 && p.pairs[i] == p.pairs[i - 1]) ? pick[i - 1] : 0;
    std::size_t count = ctx.candidates(p.pairs[i].first).size();
    for (std::size_t c = from; c < count && !found; ++c) {
      pick[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return found;
}

}  // namespace

StrengthCertificate str_exact_finite_field(const Form& f, unsigned long budget) {
  const FieldPtr& K = f.ring()->field;
  auto ord = K->finite_order();
  if (!ord) throw StrengthError("exact strength enumeration needs a finite field");
  if (*ord > 256)
    throw StrengthError("exact strength enumeration is limited to fields of order 256");
  StrengthCertificate cert;
  cert.field = K;
  if (f.is_zero()) {
    cert.status = StrengthCertificate::Status::Exact;
    cert.lower = cert.upper = 0;
    cert.reason = LowerReason::Exhaustion;
    return cert;
  }
  Witness uw = best_upper_witness(f);
  if (!witness_matches(f, uw)) throw std::logic_error("heuristic witness failed to verify");
  unsigned long u = uw.size();

  SmallField F(K);
  EnumCtx ctx(F, f.nvars(), f.degree());
  for (unsigned long s = 1; s < u; ++s) {
    for (const auto& p : patterns_for(f.degree(), s, f.nvars())) {
      unsigned long cnt = tuple_count(ctx, p);
      if (cnt > budget) {
        cert.status = StrengthCertificate::Status::BoundsOnly;
        cert.lower = s;  // every level below s was exhausted without a witness
        cert.reason = LowerReason::Exhaustion;
        cert.upper = u;
        cert.witness = std::move(uw);
        return cert;
      }
      budget -= cnt;
      if (auto w = search_pattern(ctx, f, p)) {
        cert.status = StrengthCertificate::Status::Exact;
        cert.lower = cert.upper = s;
        cert.reason = LowerReason::Exhaustion;
        cert.witness = std::move(*w);
        return cert;
      }
    }
  }
  cert.status = StrengthCertificate::Status::Exact;
  cert.lower = cert.upper = u;
  cert.reason = LowerReason::Exhaustion;
  cert.witness = std::move(uw);
  return cert;
}

namespace {

std::string fresh_gen_name(const FieldPtr& K, const std::vector<std::string>& avoid,
                           std::string base) {
  auto clash = [&](const std::string& n) {
    return K->has_generator(n) || std::find(avoid.begin(), avoid.end(), n) != avoid.end();
  };
  while (clash(base)) base += base.back();
  return base;
}

/// First algebraic extension of a finite tower of the given degree (deterministic
/// enumeration of monic minimal polynomials).
FieldPtr extend_finite(const FieldPtr& K, unsigned long deg,
                       const std::vector<std::string>& avoid) {
  if (deg == 1) return K;
  std::string gen = fresh_gen_name(K, avoid, "w");
  auto elems = K->enumerate_elements();
  std::vector<std::size_t> idx(deg, 0);  // coefficients c_0..c_{deg-1}
  while (true) {
    std::vector<FieldElem> coeffs;
    for (unsigned long i = 0; i < deg; ++i) coeffs.push_back(elems[idx[i]]);
    coeffs.push_back(K->one());
    try {
      return Field::with_algebraic(K, gen, coeffs);
    } catch (const FieldError&) {
      // reducible candidate; keep looking
    }
    std::size_t i = 0;
    for (; i < deg; ++i) {
      if (++idx[i] < elems.size()) break;
      idx[i] = 0;
    }
    if (i == deg) throw StrengthError("no irreducible polynomial found (unexpected)");
  }
}

}  // namespace

AstrResult astr(const Form& f, bool allow_fast_path) {
  if (f.is_zero()) return {0, true, std::nullopt};
  const FieldPtr& K = f.ring()->field;
  long d = f.degree();
  std::size_t n = f.nvars();

  if (allow_fast_path && d == 2 && K->characteristic() != 2) {
    unsigned long r = quadratic_rank(f);
    unsigned long s = (r + 1) / 2;
    return {s, false, DegreePattern::make(2, std::vector<long>(s, 1))};
  }

  unsigned long m = f.poly().terms().size();
  unsigned long bound = n >= 2 ? std::min<unsigned long>(m, n - 1) : 1;
  if (bound == 0) bound = 1;
  bool quadratic_exact_bound = d == 2 && K->characteristic() != 2;
  if (quadratic_exact_bound) {
    // diagonalize over the closure and pair the squares into conjugate products
    bound = std::min(bound, (quadratic_rank(f) + 1) / 2);
  }

  // cheap upper bound: a witness over a small extension already lives in the closure
  unsigned long cheap = ULONG_MAX;
  std::optional<DegreePattern> cheap_pattern;
  auto ord = K->finite_order();
  if (ord && *ord <= 16 && !quadratic_exact_bound) {
    for (unsigned long k = 1; k <= 2; ++k) {
      unsigned long lord = 1;
      for (unsigned long i = 0; i < k; ++i) lord = sat_mul(lord, *ord);
      if (lord > 256) break;
      FieldPtr L = extend_finite(K, k, f.ring()->vars);
      auto cert = str_exact_finite_field(Form(lift_poly(f.poly(), L)), 100000);
      if (cert.status == StrengthCertificate::Status::Exact && cert.upper < cheap) {
        cheap = cert.upper;
        std::vector<long> lows;
        for (const auto& [g, h] : cert.witness) {
          (void)h;
          lows.push_back(g.total_degree());
        }
        cheap_pattern = DegreePattern::make(d, lows);
      }
    }
  }

  for (unsigned long s = 1; s <= bound; ++s) {
    if (s == cheap) return {s, false, cheap_pattern};
    if (s == bound) {
      // termination: with s = #monomials each term is a single product; with
      // s = n-1 the form vanishes at a projective point of the closure, so it
      // lies in the ideal of n-1 linear forms through that point
      return {s, false, DegreePattern::make(d, std::vector<long>(s, 1))};
    }
    for (const auto& p : patterns_for(d, s, n)) {
      auto sys = theta_system(f, s, p);
      if (solvable_over_closure(sys.equations)) return {s, false, p};
    }
  }
  throw std::logic_error("unreachable: absolute strength search fell through");
}

StrengthCertificate str_bounds(const Form& f) {
  const FieldPtr& K = f.ring()->field;
  auto ord = K->finite_order();
  if (ord && *ord <= 256) return str_exact_finite_field(f);

  StrengthCertificate cert;
  cert.field = K;
  if (f.is_zero()) {
    cert.status = StrengthCertificate::Status::Exact;
    cert.lower = cert.upper = 0;
    return cert;
  }

  bool refuted1 = false;
  Witness uw;
  if (auto fc = frobenius_collapse(f)) {
    uw = *fc;
  } else if (auto diag = diagonal_quadratic(f)) {
    auto s1 = str1_diagonal(f, *diag);
    if (s1.status == Str1::Feasible)
      uw = s1.witness;
    else if (s1.status == Str1::Refuted)
      refuted1 = true;
  }
  if (uw.empty()) uw = split_witness(f);
  if (!witness_matches(f, uw)) throw std::logic_error("upper-bound witness failed to verify");

  cert.lower = astr(f).s;
  cert.reason = LowerReason::AstrBound;
  if (f.degree() == 2 && K->characteristic() != 2)
    cert.reason = LowerReason::RankBound;  // same value, via rank subadditivity
  if (refuted1 && cert.lower < 2) {
    cert.lower = 2;
    cert.reason = LowerReason::IrreducibilityBound;
  }
  cert.upper = uw.size();
  cert.witness = std::move(uw);
  cert.status = cert.lower == cert.upper ? StrengthCertificate::Status::Exact
                                         : StrengthCertificate::Status::BoundsOnly;
  return cert;
}

namespace {

unsigned long euler_phi(unsigned long m) {
  unsigned long r = m;
  for (unsigned long p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    r -= r / p;
  }
  if (m > 1) r -= r / m;
  return r;
}

/// Integer coefficients of the m-th cyclotomic polynomial, low degree first.
std::vector<long> cyclotomic(unsigned long m) {
  std::vector<long> num(m + 1, 0);  // x^m - 1
  num[0] = -1;
  num[m] = 1;
  for (unsigned long dd = 1; dd < m; ++dd) {
    if (m % dd) continue;
    std::vector<long> div = cyclotomic(dd);
    // exact long division num /= div
    std::vector<long> q(num.size() - div.size() + 1, 0);
    std::vector<long> rem = num;
    for (std::size_t i = q.size(); i-- > 0;) {
      long c = rem[i + div.size() - 1] / div.back();
      q[i] = c;
      for (std::size_t j = 0; j < div.size(); ++j) rem[i + j] -= c * div[j];
    }
    num = std::move(q);
  }
  return num;
}

/// A field L certifies the lift when a witness with <= s summands exists over it.
std::optional<Witness> witness_over(const Form& f, const FieldPtr& L, unsigned long s) {
  Form fL(lift_poly(f.poly(), L));
  auto lord = L->finite_order();
  StrengthCertificate cert =
      (lord && *lord <= 256) ? str_exact_finite_field(fL) : str_bounds(fL);
  if (cert.upper <= s &&
      (cert.status == StrengthCertificate::Status::Exact || !cert.witness.empty()))
    return cert.witness;
  return std::nullopt;
}

}  // namespace

std::optional<StrengthCertificate::Extension> extension_lift_search(
    const Form& f, unsigned long s, unsigned long degree_budget) {
  if (astr(f).s > s)
    throw StrengthError("absolute strength already exceeds the requested strength");
  const FieldPtr& K = f.ring()->field;
  if (auto w = witness_over(f, K, s)) return StrengthCertificate::Extension{K, *w};

  auto ord = K->finite_order();
  long p = K->characteristic();
  auto diag = diagonal_quadratic(f);

  for (unsigned long e = 2; e <= degree_budget; ++e) {
    if (ord) {
      unsigned long lord = 1;
      for (unsigned long i = 0; i < e; ++i) lord = sat_mul(lord, *ord);
      if (lord > 256) continue;
      FieldPtr L = extend_finite(K, e, f.ring()->vars);
      if (auto w = witness_over(f, L, s)) return StrengthCertificate::Extension{L, *w};
      continue;
    }
    if (p == 0 && K->is_prime_field()) {
      if (e == 2 && diag) {
        // quadratic extensions from coefficient-derived discriminants
        for (std::size_t i = 0; i < diag->size(); ++i)
          for (std::size_t j = 0; j < diag->size(); ++j) {
            if (i == j) continue;
            FieldElem a = -((*diag)[j].coeff / (*diag)[i].coeff);
            if (sqrt_in_field(a).status != SqrtResult::Status::NotASquare) continue;
            std::string gen = a == K->from_integer(-1) ? "i" : "r";
            gen = fresh_gen_name(K, f.ring()->vars, gen);
            FieldPtr L = Field::with_algebraic(K, gen, {-a, K->zero(), K->one()});
            if (auto w = witness_over(f, L, s)) return StrengthCertificate::Extension{L, *w};
          }
      }
      // cyclotomic candidates of matching degree
      for (unsigned long m = 3; m <= 40; ++m) {
        if (euler_phi(m) != e) continue;
        auto cyc = cyclotomic(m);
        std::vector<FieldElem> coeffs;
        for (long c : cyc) coeffs.push_back(K->from_integer(c));
        std::string gen = fresh_gen_name(K, f.ring()->vars, "r");
        FieldPtr L;
        try {
          L = Field::with_algebraic(K, gen, coeffs);
        } catch (const FieldError&) {
          continue;
        }
        if (auto w = witness_over(f, L, s)) return StrengthCertificate::Extension{L, *w};
      }
      continue;
    }
    if (p > 0) {
      // p-th-root adjunctions when e is a characteristic power
      unsigned long q = e;
      while (q % static_cast<unsigned long>(p) == 0) q /= static_cast<unsigned long>(p);
      if (q != 1 || !diag) continue;
      for (std::size_t i = 0; i < diag->size(); ++i)
        for (std::size_t j = 0; j < diag->size(); ++j) {
          if (i == j) continue;
          FieldElem t = (*diag)[j].coeff / (*diag)[i].coeff;
          if (is_qth_power(t, e)) continue;
          std::string gen = fresh_gen_name(K, f.ring()->vars, "r");
          FieldPtr L;
          try {
            L = Field::with_pth_root(K, gen, t, static_cast<unsigned>(e));
          } catch (const FieldError&) {
            continue;
          }
          if (auto w = witness_over(f, L, s)) return StrengthCertificate::Extension{L, *w};
        }
    }
  }
  return std::nullopt;
}

InequalityReport extension_inequality_check(const Form& f, const FieldPtr& L) {
  const FieldPtr& K = f.ring()->field;
  auto e = L->degree_over(*K);
  if (!e) throw StrengthError("the comparison field must be a finite extension");
  InequalityReport rep;
  rep.e = *e;
  rep.base = str_bounds(f);
  rep.ext = str_bounds(Form(lift_poly(f.poly(), L)));
  rep.holds = rep.base.lower <= *e * rep.ext.upper;
  return rep;
}

unsigned long gap_bound(unsigned long e, unsigned long s) { return e * s; }

}  // namespace formkit
