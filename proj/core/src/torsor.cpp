#include "formkit/torsor.hpp"

#include <algorithm>

namespace formkit {

namespace {

using Exp = std::vector<unsigned>;

/// Copy into a structurally identical ring (same variable list, compatible field).
Poly rehome(const Poly& f, const PolyRingPtr& R) {
  Poly g(R);
  for (const auto& [e, c] : f.terms()) g.add_term(e, c);
  return g;
}

/// Pad exponents with zeros to move from a ring into an extension of its variable
/// list (new variables appended at the end).
Poly pad_into(const Poly& f, const PolyRingPtr& R) {
  Poly g(R);
  for (const auto& [e, c] : f.terms()) {
    Exp e2 = e;
    e2.resize(R->vars.size(), 0);
    g.add_term(e2, c);
  }
  return g;
}

std::string unique_name(std::string base, const PolyRingPtr& R,
                        const std::vector<std::string>& taken) {
  auto clash = [&](const std::string& n) {
    return R->has_var(n) || R->field->has_generator(n) ||
           std::find(taken.begin(), taken.end(), n) != taken.end();
  };
  while (clash(base)) base += "y";
  return base;
}

}  // namespace

TorsorAlgebra::TorsorAlgebra(PolyRingPtr ring, std::vector<std::string> fiber_vars)
    : ring_(std::move(ring)), fiber_(std::move(fiber_vars)) {
  fiber_slot_.assign(ring_->vars.size(), false);
  for (const auto& v : fiber_) {
    std::size_t i = ring_->index_of(v);
    if (fiber_slot_[i]) throw TorsorError("duplicate fiber variable '" + v + "'");
    fiber_slot_[i] = true;
  }
  for (std::size_t i = 0; i < ring_->vars.size(); ++i)
    if (!fiber_slot_[i]) base_.push_back(ring_->vars[i]);
  for (const auto& v : fiber_) shadow_.push_back(unique_name(v + "_y", ring_, shadow_));
  std::vector<std::string> ext = ring_->vars;
  ext.insert(ext.end(), shadow_.begin(), shadow_.end());
  ext_ring_ = make_ring(ring_->field, ext);
}

long TorsorAlgebra::fiber_degree(const Exp& exps) const {
  long d = 0;
  for (std::size_t i = 0; i < fiber_slot_.size() && i < exps.size(); ++i)
    if (fiber_slot_[i]) d += exps[i];
  return d;
}

bool TorsorAlgebra::is_base_only(const Poly& f) const {
  for (const auto& [e, c] : f.terms()) {
    (void)c;
    if (fiber_degree(e) > 0) return false;
  }
  return true;
}

TorsorAlgebra make_torsor(const FieldPtr& K, const std::vector<std::string>& base_vars,
                          const std::vector<std::string>& fiber_vars) {
  std::vector<std::string> vars = base_vars;
  vars.insert(vars.end(), fiber_vars.begin(), fiber_vars.end());
  return TorsorAlgebra(make_ring(K, vars), fiber_vars);
}

Poly DeltaExpansion::component(long i, const TorsorAlgebra& T) const {
  auto it = components.find(i);
  return it == components.end() ? Poly(T.extended_ring()) : it->second;
}

Poly DeltaExpansion::assemble(const TorsorAlgebra& T) const {
  Poly s(T.extended_ring());
  for (const auto& [i, g] : components) {
    (void)i;
    s = s + g;
  }
  return s;
}

DeltaExpansion delta(const Poly& f, const TorsorAlgebra& T) {
  if (!same_ring(f.ring(), T.ring())) throw TorsorError("polynomial not in the torsor ring");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < T.fiber_vars().size(); ++i)
    pairs.emplace_back(T.fiber_vars()[i], T.shadow_vars()[i]);
  Poly translated = pairs.empty() ? pad_into(f, T.extended_ring())
                                  : rehome(double_substitute(f, pairs), T.extended_ring());
  std::size_t n = T.ring()->vars.size();
  DeltaExpansion out;
  for (const auto& [e, c] : translated.terms()) {
    long sd = 0;
    for (std::size_t i = n; i < e.size(); ++i) sd += e[i];
    auto it = out.components.find(sd);
    if (it == out.components.end())
      it = out.components.emplace(sd, Poly(T.extended_ring())).first;
    it->second.add_term(e, c);
  }
  for (auto it = out.components.begin(); it != out.components.end();)
    it = it->second.is_zero() ? out.components.erase(it) : std::next(it);
  return out;
}

Poly directional_derivative(const Poly& f, const Covector& r, const TorsorAlgebra& T) {
  for (const auto& [name, v] : r) {
    (void)v;
    if (std::find(T.fiber_vars().begin(), T.fiber_vars().end(), name) ==
        T.fiber_vars().end())
      throw TorsorError("covector entry '" + name + "' is not a fiber variable");
  }
  Poly d1 = delta(f, T).component(1, T);
  std::size_t n = T.ring()->vars.size();
  Poly out(T.ring());
  for (const auto& [e, c] : d1.terms()) {
    std::size_t shadow = 0;
    for (std::size_t i = n; i < e.size(); ++i)
      if (e[i] == 1) shadow = i - n;
    const std::string& fv = T.fiber_vars()[shadow];
    auto it = r.find(fv);
    if (it == r.end() || it->second.is_zero()) continue;
    out.add_term(Exp(e.begin(), e.begin() + static_cast<long>(n)), c * it->second);
  }
  return out;
}

long filtration_level(const Poly& f, const TorsorAlgebra& T) {
  if (f.is_zero()) throw TorsorError("filtration level of the zero element is undefined");
  return delta(f, T).components.rbegin()->first;
}

Poly init_part(const Poly& f, const TorsorAlgebra& T) {
  long n = filtration_level(f, T);
  Poly out(f.ring());
  for (const auto& [e, c] : f.terms())
    if (T.fiber_degree(e) == n) out.add_term(e, c);
  return out;
}

Poly FrobeniusDescent::assemble(const TorsorAlgebra& T) const {
  Poly s(T.ring());
  for (const auto& [a, b] : rewrite) s = s + a * b.pow(q);
  return s;
}

FrobeniusDescent frobenius_descend(const Poly& f, const TorsorAlgebra& T) {
  if (!same_ring(f.ring(), T.ring())) throw TorsorError("polynomial not in the torsor ring");
  if (T.is_base_only(f)) throw TorsorError("nothing to descend: no fiber dependence");
  long p = T.ring()->field->characteristic();
  FrobeniusDescent out;
  if (p == 0) {
    out.q = 1;
    out.rewrite.emplace_back(Poly::constant(T.ring(), T.ring()->field->one()), f);
    return out;
  }
  // largest characteristic power dividing every fiber exponent
  unsigned long q = 0;  // 0 = unbounded so far
  for (const auto& [e, c] : f.terms()) {
    (void)c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!T.is_fiber_var(i) || e[i] == 0) continue;
      unsigned long v = 1;
      unsigned long x = e[i];
      while (x % static_cast<unsigned long>(p) == 0) {
        v *= static_cast<unsigned long>(p);
        x /= static_cast<unsigned long>(p);
      }
      q = q == 0 ? v : std::min(q, v);
    }
  }
  out.q = q;
  std::size_t n = T.ring()->vars.size();
  std::map<Exp, Poly> groups;  // fiber monomial of b -> accumulated base part a
  for (const auto& [e, c] : f.terms()) {
    Exp fib(n, 0), base(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (T.is_fiber_var(i))
        fib[i] = e[i] / static_cast<unsigned>(q);
      else
        base[i] = e[i];
    }
    auto it = groups.find(fib);
    if (it == groups.end()) it = groups.emplace(fib, Poly(T.ring())).first;
    it->second.add_term(base, c);
  }
  for (const auto& [fib, a] : groups) {
    if (a.is_zero()) continue;
    Poly b(T.ring());
    b.add_term(fib, T.ring()->field->one());
    out.rewrite.emplace_back(a, b);
  }
  return out;
}

bool twisted_delta_check(const Poly& f, const TorsorAlgebra& T, unsigned long q) {
  if (q == 0) throw TorsorError("twist power must be positive");
  Poly twisted(T.ring());
  for (const auto& [e, c] : f.terms()) {
    Exp e2 = e;
    for (std::size_t i = 0; i < e2.size(); ++i) {
      if (!T.is_fiber_var(i)) continue;
      if (e2[i] % q != 0)
        throw TorsorError("fiber exponent not divisible by the twist power");
      e2[i] = static_cast<unsigned>(e2[i] / q);
    }
    twisted.add_term(e2, c);
  }
  DeltaExpansion full = delta(f, T);
  DeltaExpansion tw = delta(twisted, T);
  // Δ_j(f) must vanish off multiples of q
  for (const auto& [j, g] : full.components) {
    (void)g;
    if (static_cast<unsigned long>(j) % q != 0) return false;
  }
  std::size_t n = T.ring()->vars.size();
  auto scale_up = [&](const Poly& g) {
    Poly h(T.extended_ring());
    for (const auto& [e, c] : g.terms()) {
      Exp e2 = e;
      for (std::size_t i = 0; i < e2.size(); ++i) {
        bool fiberish = i < n ? T.is_fiber_var(i) : true;  // shadows scale too
        if (fiberish) e2[i] = static_cast<unsigned>(e2[i] * q);
      }
      h.add_term(e2, c);
    }
    return h;
  };
  long top = 0;
  if (!tw.components.empty()) top = tw.components.rbegin()->first;
  if (!full.components.empty()) top = std::max(top, full.components.rbegin()->first);
  for (long i = 0; i <= top; ++i) {
    if (scale_up(tw.component(i, T)) != full.component(static_cast<long>(q) * i, T))
      return false;
  }
  return true;
}

SymShiftModel::SymShiftModel(const FieldPtr& K, unsigned d,
                             std::vector<std::string> shift_units,
                             std::vector<std::string> fiber_units,
                             std::vector<std::string> extra_base)
    : d_(d), shift_units_(std::move(shift_units)), fiber_units_(std::move(fiber_units)) {
  if (d_ == 0) throw TorsorError("the fiber representation must have positive degree");
  units_ = shift_units_;
  units_.insert(units_.end(), fiber_units_.begin(), fiber_units_.end());
  if (units_.empty()) throw TorsorError("no units");
  // all degree-d exponent vectors over the units, lexicographically decreasing
  Exp cur(units_.size(), 0);
  cur[0] = d_;
  while (true) {
    labels_.push_back(cur);
    // next composition in lexicographically decreasing order
    std::size_t k = units_.size();
    for (std::size_t i = units_.size() - 1; i-- > 0;)
      if (cur[i] > 0) {
        k = i;
        break;
      }
    if (k == units_.size()) break;
    unsigned rest = 0;
    for (std::size_t i = k + 1; i < units_.size(); ++i) {
      rest += cur[i];
      cur[i] = 0;
    }
    --cur[k];
    cur[k + 1] = rest + 1;
  }
  std::vector<std::string> vars = std::move(extra_base);
  for (const auto& lab : labels_) {
    std::string name = "z";
    for (std::size_t i = 0; i < lab.size(); ++i)
      for (unsigned t = 0; t < lab[i]; ++t) name += "_" + units_[i];
    coord_names_.emplace(lab, name);
    vars.push_back(name);
  }
  ring_ = make_ring(K, vars);
  shift_torsor_ = std::make_shared<TorsorAlgebra>(ring_, pure_fiber_coords());
  inner_torsor_ = std::make_shared<TorsorAlgebra>(ring_, pure_shift_coords());
}

const std::string& SymShiftModel::coord(const Exp& label) const {
  auto it = coord_names_.find(label);
  if (it == coord_names_.end()) throw TorsorError("unknown coordinate label");
  return it->second;
}

std::vector<std::string> SymShiftModel::pure_fiber_coords() const {
  std::vector<std::string> out;
  for (const auto& lab : labels_) {
    bool pure = true;
    for (std::size_t i = 0; i < shift_units_.size(); ++i)
      if (lab[i] > 0) pure = false;
    if (pure) out.push_back(coord_names_.at(lab));
  }
  return out;
}

std::vector<std::string> SymShiftModel::pure_shift_coords() const {
  std::vector<std::string> out;
  for (const auto& lab : labels_) {
    bool pure = true;
    for (std::size_t i = shift_units_.size(); i < lab.size(); ++i)
      if (lab[i] > 0) pure = false;
    if (pure) out.push_back(coord_names_.at(lab));
  }
  return out;
}

namespace {

/// Polynomials in a formal parameter t with Poly coefficients.
using TSeries = std::vector<Poly>;

TSeries ts_add(const TSeries& a, const TSeries& b, const PolyRingPtr& R) {
  TSeries out(std::max(a.size(), b.size()), Poly(R));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = out[i] + a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = out[i] + b[i];
  return out;
}

TSeries ts_mul(const TSeries& a, const TSeries& b, const PolyRingPtr& R) {
  if (a.empty() || b.empty()) return {};
  TSeries out(a.size() + b.size() - 1, Poly(R));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

void ts_trim(TSeries& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

long binom(unsigned n, unsigned k) {
  long r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Poly PhiExpansion::coefficient(std::size_t i, const SymShiftModel& M) const {
  return i < coefficients.size() ? coefficients[i] : Poly(M.ring());
}

PhiExpansion phi_expand(const Poly& f, const UnitMap& phi, const SymShiftModel& M) {
  if (!same_ring(f.ring(), M.ring())) throw TorsorError("polynomial not in the model ring");
  // validate: injective, shift units -> fiber units
  std::map<std::string, std::size_t> unit_index;
  for (std::size_t i = 0; i < M.units().size(); ++i) unit_index.emplace(M.units()[i], i);
  std::vector<bool> hit(M.units().size(), false);
  std::map<std::size_t, std::size_t> image;  // shift unit slot -> fiber unit slot
  for (const auto& [u, e] : phi) {
    auto iu = unit_index.find(u), ie = unit_index.find(e);
    if (iu == unit_index.end() || iu->second >= M.shift_units().size())
      throw TorsorError("'" + u + "' is not a shift unit");
    if (ie == unit_index.end() || ie->second < M.shift_units().size())
      throw TorsorError("'" + e + "' is not a fiber unit");
    if (hit[ie->second]) throw TorsorError("the unit map must be injective");
    hit[ie->second] = true;
    image.emplace(iu->second, ie->second);
  }

  const PolyRingPtr& R = M.ring();
  const FieldPtr& K = R->field;
  // image of each ring variable as a t-series
  std::vector<TSeries> var_image(R->vars.size());
  std::map<std::string, std::size_t> var_pos;
  for (std::size_t i = 0; i < R->vars.size(); ++i) {
    var_pos.emplace(R->vars[i], i);
    var_image[i] = {Poly::variable(R, R->vars[i])};
  }
  for (const auto& lab : M.labels()) {
    // expand the product of unit factors (u + t φ(u))^{lab_u} over unit monomials
    std::map<Exp, std::vector<FieldElem>> acc;  // unit monomial -> t coefficients
    acc.emplace(Exp(M.units().size(), 0), std::vector<FieldElem>{K->one()});
    for (std::size_t u = 0; u < lab.size(); ++u) {
      if (lab[u] == 0) continue;
      auto im = image.find(u);
      std::map<Exp, std::vector<FieldElem>> factor;
      if (im == image.end()) {
        Exp e(M.units().size(), 0);
        e[u] = lab[u];
        factor.emplace(e, std::vector<FieldElem>{K->one()});
      } else {
        for (unsigned i = 0; i <= lab[u]; ++i) {
          FieldElem c = K->from_integer(binom(lab[u], i));
          if (c.is_zero()) continue;
          Exp e(M.units().size(), 0);
          e[u] = lab[u] - i;
          e[im->second] += i;
          std::vector<FieldElem> tc(i + 1, K->zero());
          tc[i] = c;
          factor.emplace(e, std::move(tc));
        }
      }
      std::map<Exp, std::vector<FieldElem>> next;
      for (const auto& [e1, t1] : acc)
        for (const auto& [e2, t2] : factor) {
          Exp e(M.units().size());
          for (std::size_t j = 0; j < e.size(); ++j) e[j] = e1[j] + e2[j];
          auto& slot = next[e];
          if (slot.size() < t1.size() + t2.size() - 1)
            slot.resize(t1.size() + t2.size() - 1, K->zero());
          for (std::size_t a = 0; a < t1.size(); ++a)
            for (std::size_t b = 0; b < t2.size(); ++b)
              slot[a + b] = slot[a + b] + t1[a] * t2[b];
        }
      acc = std::move(next);
    }
    TSeries img;
    for (const auto& [e, tc] : acc) {
      Poly zc = Poly::variable(R, M.coord(e));
      for (std::size_t i = 0; i < tc.size(); ++i) {
        if (tc[i].is_zero()) continue;
        if (img.size() <= i) img.resize(i + 1, Poly(R));
        img[i] = img[i] + zc * tc[i];
      }
    }
    var_image[var_pos.at(M.coord(lab))] = std::move(img);
  }

  TSeries total{Poly(R)};
  for (const auto& [e, c] : f.terms()) {
    TSeries term{Poly::constant(R, c)};
    for (std::size_t i = 0; i < e.size(); ++i)
      for (unsigned k = 0; k < e[i]; ++k) term = ts_mul(term, var_image[i], R);
    total = ts_add(total, term, R);
  }
  ts_trim(total);
  if (total.empty()) total.push_back(Poly(R));
  PhiExpansion out;
  out.coefficients = std::move(total);
  if (out.coefficients[0] != f) throw std::logic_error("t^0 coefficient mismatch");
  return out;
}

EmbedWitness embed_witness(const Poly& f, const Covector& r0, const UnitMap& phi,
                           const SymShiftModel& M, const std::vector<Poly>& J) {
  // f must only involve the inner fiber block (plus inert base variables): the
  // t^d-coefficient argument evaluates f on functionals restricted to that block.
  std::size_t coord_offset = M.ring()->vars.size() - M.labels().size();
  for (const auto& [e, c] : f.terms()) {
    (void)c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > 0 && i >= coord_offset && !M.inner_torsor().is_fiber_var(i))
        throw TorsorError(
            "the form may only involve inner-block coordinates and base variables");
  }
  GroebnerBasis G = buchberger(J);
  if (!ideal_member(f, G)) throw TorsorError("the form does not lie in the ideal");
  EmbedWitness out;
  out.h = directional_derivative(f, r0, M.inner_torsor());
  PhiExpansion ex = phi_expand(f, phi, M);
  out.w = ex.coefficient(M.degree(), M);

  const TorsorAlgebra& ST = M.shift_torsor();
  out.report.level_ok = out.w.is_zero() || filtration_level(out.w, ST) <= 1;
  out.report.ideal_ok = ideal_member(out.w, G);

  // φ*(r): pure-shift coordinate label m ↦ r(coordinate of φ(m))
  std::map<std::string, std::size_t> unit_index;
  for (std::size_t i = 0; i < M.units().size(); ++i) unit_index.emplace(M.units()[i], i);
  out.report.identity_ok = true;
  for (const auto& fc : M.pure_fiber_coords()) {
    Covector r{{fc, M.ring()->field->one()}};
    Poly lhs = directional_derivative(out.w, r, ST);
    Covector pulled;
    for (const auto& lab : M.labels()) {
      bool pure_shift = true;
      for (std::size_t i = M.shift_units().size(); i < lab.size(); ++i)
        if (lab[i] > 0) pure_shift = false;
      if (!pure_shift) continue;
      bool total = true;
      Exp img(M.units().size(), 0);
      for (std::size_t i = 0; i < M.shift_units().size(); ++i) {
        if (lab[i] == 0) continue;
        auto it = phi.find(M.shift_units()[i]);
        if (it == phi.end()) {
          total = false;
          break;
        }
        img[unit_index.at(it->second)] += lab[i];
      }
      if (!total) continue;  // φ undefined on this unit: no t^d contribution
      if (M.coord(img) == fc) pulled.emplace(M.coord(lab), M.ring()->field->one());
    }
    Poly rhs = directional_derivative(f, pulled, M.inner_torsor());
    if (lhs != rhs) {
      out.report.identity_ok = false;
      out.report.detail = "derivative identity fails for the covector dual to " + fc;
      break;
    }
  }
  return out;
}

}  // namespace formkit
