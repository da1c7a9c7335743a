#include "formkit/groebner.hpp"

#include <algorithm>
#include <map>

namespace formkit {

namespace {

using Exp = std::vector<unsigned>;

int grevlex_cmp(const Exp& a, const Exp& b, std::size_t lo, std::size_t hi) {
  long da = 0, db = 0;
  for (std::size_t i = lo; i < hi; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = hi; i-- > lo;) {
    if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace

bool MonomialOrder::less(const Exp& a, const Exp& b) const {
  std::size_t n = a.size();
  if (split > 0) {
    int c = grevlex_cmp(a, b, 0, std::min(split, n));
    if (c != 0) return c < 0;
    return grevlex_cmp(a, b, std::min(split, n), n) < 0;
  }
  return grevlex_cmp(a, b, 0, n) < 0;
}

namespace {

struct Cmp {
  MonomialOrder ord;
  bool operator()(const Exp& a, const Exp& b) const { return ord.greater(a, b); }
};

using OMap = std::map<Exp, FieldElem, Cmp>;

OMap to_omap(const Poly& f, const MonomialOrder& ord) {
  OMap m{Cmp{ord}};
  for (const auto& [e, c] : f.terms()) m.emplace(e, c);
  return m;
}

Poly to_poly(const OMap& m, const PolyRingPtr& ring) {
  Poly f(ring);
  for (const auto& [e, c] : m) f.add_term(e, c);
  return f;
}

bool divides(const Exp& a, const Exp& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Exp exp_lcm(const Exp& a, const Exp& b) {
  Exp r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

Exp exp_sub(const Exp& a, const Exp& b) {
  Exp r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

long exp_deg(const Exp& a) {
  long d = 0;
  for (unsigned x : a) d += x;
  return d;
}

struct BElem {
  OMap poly;  // monic
  Exp lt;
  long sugar;
};

/// work -= c * x^shift * g
void sub_mult(OMap& work, const FieldElem& c, const Exp& shift, const OMap& g) {
  for (const auto& [e, gc] : g) {
    Exp e2(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) e2[i] = e[i] + shift[i];
    FieldElem v = c * gc;
    auto it = work.find(e2);
    if (it == work.end()) {
      if (!v.is_zero()) work.emplace(std::move(e2), -v);
    } else {
      it->second = it->second - v;
      if (it->second.is_zero()) work.erase(it);
    }
  }
}

/// Full reduction of f by the basis (tail terms included).
OMap reduce_full(OMap f, const std::vector<BElem>& basis, const std::vector<bool>& alive) {
  OMap out{f.key_comp()};
  while (!f.empty()) {
    auto lead = *f.begin();
    bool hit = false;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (!alive[k]) continue;
      if (divides(basis[k].lt, lead.first)) {
        sub_mult(f, lead.second, exp_sub(lead.first, basis[k].lt), basis[k].poly);
        hit = true;
        break;
      }
    }
    if (!hit) {
      out.emplace(lead.first, lead.second);
      f.erase(f.begin());
    }
  }
  return out;
}

void make_monic(OMap& f) {
  if (f.empty()) return;
  FieldElem inv = f.begin()->second.inverse();
  for (auto& [e, c] : f) c = c * inv;
}

struct Pair {
  std::size_t i, j;
  Exp lcm;
  long sugar;
};

}  // namespace

bool GroebnerBasis::is_trivial() const {
  return basis_.size() == 1 && basis_[0].is_constant() && !basis_[0].is_zero();
}

GroebnerBasis buchberger(const std::vector<Poly>& gens, MonomialOrder order) {
  if (gens.empty())
    throw std::logic_error("buchberger needs at least the ring (empty generator list "
                           "has no ring attached); pass a zero polynomial instead");
  PolyRingPtr ring = gens[0].ring();
  for (const auto& g : gens)
    if (!same_ring(g.ring(), ring)) throw std::logic_error("generators from different rings");

  std::vector<BElem> basis;
  std::vector<bool> alive;
  std::vector<Pair> pairs;
  auto add_elem = [&](OMap f, long sugar) {
    make_monic(f);
    BElem e{std::move(f), {}, sugar};
    e.lt = e.poly.begin()->first;
    std::size_t n = basis.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      Exp l = exp_lcm(basis[i].lt, e.lt);
      long s = std::max(basis[i].sugar + exp_deg(exp_sub(l, basis[i].lt)),
                        sugar + exp_deg(exp_sub(l, e.lt)));
      pairs.push_back({i, n, std::move(l), s});
    }
    basis.push_back(std::move(e));
    alive.push_back(true);
  };

  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    add_elem(to_omap(g, order), g.total_degree());
  }

  while (!pairs.empty()) {
    // normal/sugar strategy: smallest sugar, then smallest lcm in the order
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs.size(); ++k) {
      if (pairs[k].sugar < pairs[best].sugar ||
          (pairs[k].sugar == pairs[best].sugar &&
           order.less(pairs[k].lcm, pairs[best].lcm)))
        best = k;
    }
    Pair pr = std::move(pairs[best]);
    pairs.erase(pairs.begin() + static_cast<long>(best));

    // product criterion
    bool coprime = true;
    for (std::size_t t = 0; t < pr.lcm.size(); ++t)
      if (basis[pr.i].lt[t] > 0 && basis[pr.j].lt[t] > 0) {
        coprime = false;
        break;
      }
    if (coprime) continue;
    // chain criterion: some k with lt_k | lcm and both mixed pairs already gone
    bool chained = false;
    for (std::size_t k = 0; k < basis.size() && !chained; ++k) {
      if (k == pr.i || k == pr.j || !alive[k]) continue;
      if (!divides(basis[k].lt, pr.lcm)) continue;
      bool pending = false;
      for (const auto& q : pairs)
        if ((q.i == std::min(k, pr.i) && q.j == std::max(k, pr.i)) ||
            (q.i == std::min(k, pr.j) && q.j == std::max(k, pr.j))) {
          pending = true;
          break;
        }
      if (!pending) chained = true;
    }
    if (chained) continue;

    OMap s{Cmp{order}};
    sub_mult(s, -basis[pr.i].poly.begin()->second.one_like(),
             exp_sub(pr.lcm, basis[pr.i].lt), basis[pr.i].poly);
    sub_mult(s, basis[pr.j].poly.begin()->second.one_like(),
             exp_sub(pr.lcm, basis[pr.j].lt), basis[pr.j].poly);
    OMap h = reduce_full(std::move(s), basis, alive);
    if (!h.empty()) add_elem(std::move(h), pr.sugar);
  }

  // minimalize
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!alive[i]) continue;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (i == j || !alive[j]) continue;
      if (divides(basis[j].lt, basis[i].lt)) {
        alive[i] = false;
        break;
      }
    }
  }
  // autoreduce tails
  std::vector<Poly> out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!alive[i]) continue;
    std::vector<bool> others = alive;
    others[i] = false;
    OMap r = reduce_full(basis[i].poly, basis, others);
    make_monic(r);
    if (!r.empty()) out.push_back(to_poly(r, ring));
  }
  // deterministic output order: ascending leading terms
  std::sort(out.begin(), out.end(), [&](const Poly& a, const Poly& b) {
    Exp la = to_omap(a, order).begin()->first;
    Exp lb = to_omap(b, order).begin()->first;
    return order.less(la, lb);
  });
  return GroebnerBasis(ring, order, std::move(out), gens);
}

Poly normal_form(const Poly& f, const GroebnerBasis& G) {
  if (!same_ring(f.ring(), G.ring())) throw std::logic_error("ring mismatch in normal form");
  std::vector<BElem> basis;
  std::vector<bool> alive;
  for (const auto& g : G.generators()) {
    OMap m = to_omap(g, G.order());
    BElem e{std::move(m), {}, 0};
    e.lt = e.poly.begin()->first;
    basis.push_back(std::move(e));
    alive.push_back(true);
  }
  OMap r = reduce_full(to_omap(f, G.order()), basis, alive);
  return to_poly(r, f.ring());
}

bool ideal_member(const Poly& f, const GroebnerBasis& G) {
  return normal_form(f, G).is_zero();
}

bool solvable_over_closure(const std::vector<Poly>& gens) {
  return !buchberger(gens).is_trivial();
}

GroebnerBasis eliminate(const GroebnerBasis& G, const std::vector<std::string>& keep) {
  const PolyRingPtr& R = G.ring();
  std::vector<std::string> drop;
  for (const auto& v : R->vars) {
    if (std::find(keep.begin(), keep.end(), v) == keep.end()) drop.push_back(v);
  }
  for (const auto& v : keep) (void)R->index_of(v);  // must exist
  std::vector<std::string> reordered = drop;
  reordered.insert(reordered.end(), keep.begin(), keep.end());
  PolyRingPtr R2 = make_ring(R->field, reordered);
  // permutation: position in R -> position in R2
  std::vector<std::size_t> perm(R->vars.size());
  for (std::size_t i = 0; i < R->vars.size(); ++i) perm[i] = R2->index_of(R->vars[i]);
  auto remap = [&](const Poly& f) {
    Poly g(R2);
    for (const auto& [e, c] : f.terms()) {
      Exp e2(e.size(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) e2[perm[i]] = e[i];
      g.add_term(e2, c);
    }
    return g;
  };
  std::vector<Poly> mapped;
  for (const auto& g : G.original_generators()) mapped.push_back(remap(g));
  MonomialOrder block{drop.size()};
  GroebnerBasis G2 = buchberger(mapped, block);
  PolyRingPtr Rk = make_ring(R->field, keep);
  std::vector<Poly> kept;
  for (const auto& g : G2.generators()) {
    bool pure = true;
    for (const auto& [e, c] : g.terms()) {
      (void)c;
      for (std::size_t i = 0; i < drop.size(); ++i)
        if (e[i] != 0) {
          pure = false;
          break;
        }
      if (!pure) break;
    }
    if (!pure) continue;
    Poly h(Rk);
    for (const auto& [e, c] : g.terms())
      h.add_term(Exp(e.begin() + static_cast<long>(drop.size()), e.end()), c);
    kept.push_back(h);
  }
  return GroebnerBasis(Rk, MonomialOrder{}, kept, kept);
}

bool radical_member(const Poly& f, const std::vector<Poly>& gens) {
  const PolyRingPtr& R = f.ring();
  std::string u = "u";
  while (R->has_var(u) || R->field->has_generator(u)) u += "u";
  std::vector<std::string> vars = R->vars;
  vars.push_back(u);
  PolyRingPtr R2 = make_ring(R->field, vars);
  auto lift = [&](const Poly& g) {
    Poly h(R2);
    for (const auto& [e, c] : g.terms()) {
      Exp e2 = e;
      e2.push_back(0);
      h.add_term(e2, c);
    }
    return h;
  };
  std::vector<Poly> sys;
  for (const auto& g : gens) sys.push_back(lift(g));
  Poly one = Poly::constant(R2, R2->field->one());
  sys.push_back(one - Poly::variable(R2, u) * lift(f));
  return buchberger(sys).is_trivial();
}

}  // namespace formkit
