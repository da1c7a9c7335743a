#include "formkit/glcase.hpp"

#include <algorithm>
#include <cctype>

#include "formkit/strength.hpp"

namespace formkit {

namespace {

unsigned long binom(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  unsigned long r = 1;
  for (unsigned long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::string sym_label(const std::vector<unsigned>& exps) {
  std::string s;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    s += "e" + std::to_string(i + 1);
    if (exps[i] > 1) s += "^" + std::to_string(exps[i]);
  }
  return s.empty() ? "1" : s;
}

bool simple_label(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); });
}

}  // namespace

LevelSpace LevelSpace::sym(unsigned a) {
  LevelSpace s;
  s.kind_ = Kind::Sym;
  s.a_ = a;
  return s;
}

LevelSpace LevelSpace::twist(LevelSpace inner, unsigned q) {
  if (q == 0) throw GLCaseError("twist amount must be positive");
  LevelSpace s;
  s.kind_ = Kind::Twist;
  s.q_ = q;
  s.parts_.push_back(std::move(inner));
  return s;
}

LevelSpace LevelSpace::sum(std::vector<LevelSpace> parts) {
  LevelSpace s;
  s.kind_ = Kind::Sum;
  s.parts_ = std::move(parts);
  return s;
}

unsigned long LevelSpace::degree() const {
  switch (kind_) {
    case Kind::Sym:
      return a_;
    case Kind::Twist:
      return q_ * parts_[0].degree();
    case Kind::Sum: {
      unsigned long d = 0;
      for (const auto& p : parts_) d = std::max(d, p.degree());
      return d;
    }
  }
  return 0;
}

unsigned long LevelSpace::dimension(std::size_t n) const {
  switch (kind_) {
    case Kind::Sym:
      return binom(n + a_ - (a_ ? 1 : 0), a_);
    case Kind::Twist:
      return parts_[0].dimension(n);
    case Kind::Sum: {
      unsigned long d = 0;
      for (const auto& p : parts_) d += p.dimension(n);
      return d;
    }
  }
  return 0;
}

std::vector<std::string> LevelSpace::basis(std::size_t n) const {
  std::vector<std::string> out;
  switch (kind_) {
    case Kind::Sym:
      for (const auto& e : monomials_of(a_, n)) out.push_back(sym_label(e));
      break;
    case Kind::Twist:
      for (const auto& l : parts_[0].basis(n)) {
        std::string base = simple_label(l) ? l : "(" + l + ")";
        out.push_back(base + "^(" + std::to_string(q_) + ")");
      }
      break;
    case Kind::Sum:
      for (const auto& p : parts_) {
        auto b = p.basis(n);
        out.insert(out.end(), b.begin(), b.end());
      }
      break;
  }
  return out;
}

std::vector<ShiftPiece> shift_decompose(unsigned a, std::size_t m, std::size_t n) {
  std::vector<ShiftPiece> out;
  for (unsigned i = 0; i <= a; ++i) {
    ShiftPiece p;
    p.i = i;
    p.dim_first = LevelSpace::sym(i).dimension(m);
    p.dim_second = LevelSpace::sym(a - i).dimension(n);
    p.dim = p.dim_first * p.dim_second;
    out.push_back(p);
  }
  return out;
}

namespace {

std::string w_name(const std::vector<unsigned>& alpha) {
  std::string s = "w_";
  std::string sep = alpha.size() > 9 ? "_" : "";
  bool first = true;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (unsigned r = 0; r < alpha[i]; ++r) {
      if (!first) s += sep;
      s += std::to_string(i + 1);
      first = false;
    }
  return s;
}

/// Workspace for expanding [v^2]^2 - [v^4] at level n over GF(2): an auxiliary
/// ring with e-variables (and optionally formal c-parameters) in front of the
/// z/w coordinates.
struct NsWorkspace {
  std::size_t n;
  bool formal;              // with c-parameters
  PolyRingPtr aux;          // [c_1..c_n] e_1..e_n z_1..z_n w_*
  PolyRingPtr out;          // z_1..z_n w_*
  std::size_t e_off, z_off, w_off;
  std::vector<std::vector<unsigned>> w_labels;
  std::map<std::vector<unsigned>, std::size_t> w_index;

  NsWorkspace(std::size_t n_, bool formal_) : n(n_), formal(formal_) {
    auto K = Field::prime_field(2);
    std::vector<std::string> vars, out_vars;
    if (formal)
      for (std::size_t i = 1; i <= n; ++i) vars.push_back("c" + std::to_string(i));
    e_off = vars.size();
    for (std::size_t i = 1; i <= n; ++i) vars.push_back("e" + std::to_string(i));
    z_off = vars.size();
    for (std::size_t i = 1; i <= n; ++i) {
      vars.push_back("z" + std::to_string(i));
      out_vars.push_back(vars.back());
    }
    w_off = vars.size();
    w_labels = monomials_of(4, n);
    for (std::size_t k = 0; k < w_labels.size(); ++k) {
      w_index.emplace(w_labels[k], k);
      vars.push_back(w_name(w_labels[k]));
      out_vars.push_back(vars.back());
    }
    aux = make_ring(K, vars);
    out = make_ring(K, out_vars);
  }

  /// e-degree-2 terms -> z coordinates (cross terms cancel in characteristic 2,
  /// so only squares can appear).
  Poly to_twist(const Poly& f) const {
    Poly g(aux);
    for (const auto& [e, c] : f.terms()) {
      auto e2 = e;
      std::size_t hit = aux->vars.size();
      for (std::size_t i = 0; i < n; ++i)
        if (e2[e_off + i] != 0) {
          if (e2[e_off + i] != 2 || hit != aux->vars.size())
            throw GLCaseError("non-square term survived the Frobenius expansion");
          hit = i;
          e2[e_off + i] = 0;
        }
      if (hit == aux->vars.size())
        throw GLCaseError("term without e-part in the Frobenius expansion");
      e2[z_off + hit] = 1;
      g.add_term(e2, c);
    }
    return g;
  }

  /// e-degree-4 terms -> w coordinates.
  Poly to_sym4(const Poly& f) const {
    Poly g(aux);
    for (const auto& [e, c] : f.terms()) {
      auto e2 = e;
      std::vector<unsigned> alpha(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        alpha[i] = e2[e_off + i];
        e2[e_off + i] = 0;
      }
      e2[w_off + w_index.at(alpha)] += 1;
      g.add_term(e2, c);
    }
    return g;
  }

  /// [v^2]^2 - [v^4] for v = sum coeffs[i] * e_i (coeffs in the auxiliary ring).
  Poly expand(const std::vector<Poly>& coeffs) const {
    Poly v(aux);
    for (std::size_t i = 0; i < n; ++i)
      v = v + coeffs[i] * Poly::variable(aux, aux->vars[e_off + i]);
    Poly v2 = v * v;
    Poly z = to_twist(v2);
    return z * z - to_sym4(v2 * v2);
  }

  /// Drop the c/e slots (which must be zero) into the output ring.
  Poly project(const Poly& f) const {
    Poly g(out);
    for (const auto& [e, c] : f.terms()) {
      std::vector<unsigned> e2(e.begin() + static_cast<long>(z_off), e.end());
      g.add_term(e2, c);
    }
    return g;
  }
};

}  // namespace

NsIdeal ns_example_ideal(std::size_t n) {
  NsWorkspace ws(n, true);
  NsIdeal I;
  I.ring = ws.out;
  for (std::size_t i = 0; i < n; ++i) I.z_vars.push_back(ws.out->vars[i]);
  for (std::size_t i = n; i < ws.out->vars.size(); ++i) I.w_vars.push_back(ws.out->vars[i]);
  if (n == 0) return I;

  std::vector<Poly> coeffs;
  for (std::size_t i = 0; i < n; ++i)
    coeffs.push_back(Poly::variable(ws.aux, ws.aux->vars[i]));
  Poly D = ws.expand(coeffs);

  // split by c-monomial and collect the distinct nonzero coefficients
  std::map<std::vector<unsigned>, Poly> by_c;
  for (const auto& [e, c] : D.terms()) {
    std::vector<unsigned> ckey(e.begin(), e.begin() + static_cast<long>(n));
    std::vector<unsigned> rest = e;
    for (std::size_t i = 0; i < n; ++i) rest[i] = 0;
    auto it = by_c.find(ckey);
    if (it == by_c.end()) it = by_c.emplace(ckey, Poly(ws.aux)).first;
    it->second.add_term(rest, c);
  }
  for (const auto& [ckey, g] : by_c) {
    (void)ckey;
    if (g.is_zero()) continue;
    Poly p = ws.project(g);
    if (std::find(I.gens.begin(), I.gens.end(), p) == I.gens.end()) I.gens.push_back(p);
  }
  return I;
}

Poly ns_example_generator(const NsIdeal& I, const std::vector<FieldElem>& v) {
  std::size_t n = I.z_vars.size();
  if (v.size() != n) throw GLCaseError("vector length must match the level");
  NsWorkspace ws(n, false);
  std::vector<Poly> coeffs;
  for (const auto& c : v) coeffs.push_back(Poly::constant(ws.aux, c));
  Poly D = ws.project(ws.expand(coeffs));
  return D.coefficients_into(I.ring);
}

NsReport ns_example_check(std::size_t n) {
  NsReport rep;
  NsIdeal I = ns_example_ideal(n);
  if (n == 0) {
    rep.injective = rep.f_surjective = true;
    rep.detail = "empty level";
    return rep;
  }
  // block order eliminating the z-variables
  auto G = buchberger(I.gens, MonomialOrder{I.z_vars.size()});
  auto elim = eliminate(G, I.w_vars);
  rep.injective = elim.is_zero_ideal();

  rep.f_surjective = true;
  for (const auto& zv : I.z_vars) {
    Poly sq = Poly::variable(I.ring, zv).pow(2);
    Poly nf = normal_form(sq, G);
    for (const auto& [e, c] : nf.terms()) {
      (void)c;
      for (std::size_t i = 0; i < I.z_vars.size(); ++i)
        if (e[i] != 0) rep.f_surjective = false;
    }
  }
  rep.detail = rep.pass() ? "coordinate ring embeds and squares descend"
                          : "check failed at level " + std::to_string(n);
  return rep;
}

}  // namespace formkit
