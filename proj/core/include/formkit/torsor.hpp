#pragma once

#include <map>
#include <string>
#include <vector>

#include "formkit/groebner.hpp"
#include "formkit/poly.hpp"

namespace formkit {

struct TorsorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Split torsor algebra B = A ⊗ Sym(V): a polynomial ring whose variables are
/// partitioned into base variables (generating A) and fiber variables (a basis of
/// the finite truncation of V). The comultiplication translates the fiber block by
/// fresh shadow partners.
class TorsorAlgebra {
 public:
  /// Partition an existing ring; every ring variable not listed as fiber is base.
  TorsorAlgebra(PolyRingPtr ring, std::vector<std::string> fiber_vars);

  const PolyRingPtr& ring() const { return ring_; }
  /// ring variables followed by the shadow partners, in fiber order.
  const PolyRingPtr& extended_ring() const { return ext_ring_; }
  const std::vector<std::string>& base_vars() const { return base_; }
  const std::vector<std::string>& fiber_vars() const { return fiber_; }
  const std::vector<std::string>& shadow_vars() const { return shadow_; }

  bool is_fiber_var(std::size_t ring_index) const { return fiber_slot_[ring_index]; }
  long fiber_degree(const std::vector<unsigned>& exps) const;
  /// True when f does not involve the fiber block (f ∈ A).
  bool is_base_only(const Poly& f) const;

 private:
  PolyRingPtr ring_, ext_ring_;
  std::vector<std::string> base_, fiber_, shadow_;
  std::vector<bool> fiber_slot_;
};

TorsorAlgebra make_torsor(const FieldPtr& K, const std::vector<std::string>& base_vars,
                          const std::vector<std::string>& fiber_vars);

/// Δ(f) = f(x + y) decomposed by total degree in the shadow block. Component 0 is f
/// itself (embedded); component i is homogeneous of degree i in the shadows.
struct DeltaExpansion {
  std::map<long, Poly> components;  // in the extended ring; only nonzero entries

  Poly component(long i, const TorsorAlgebra& T) const;
  Poly assemble(const TorsorAlgebra& T) const;  // Σ_i Δ_i(f) = Δ(f)
};

DeltaExpansion delta(const Poly& f, const TorsorAlgebra& T);

/// A covector on the fiber truncation: fiber variable name -> value (missing = 0).
using Covector = std::map<std::string, FieldElem>;

/// ∂_r f: r applied to the shadow factor of Δ_1(f); lives back in T's ring.
Poly directional_derivative(const Poly& f, const Covector& r, const TorsorAlgebra& T);

/// Minimal n with Δ_i(f) = 0 for all i > n. Throws TorsorError for f = 0.
long filtration_level(const Poly& f, const TorsorAlgebra& T);
/// The fiber-degree-n part of f at n = filtration_level(f); never zero.
Poly init_part(const Poly& f, const TorsorAlgebra& T);

/// f = Σ a_i · b_i^q with a_i base-only and q the minimal characteristic power
/// such that Δ_q(f) ≠ 0.
struct FrobeniusDescent {
  unsigned long q = 1;
  std::vector<std::pair<Poly, Poly>> rewrite;  // (a_i, b_i)

  Poly assemble(const TorsorAlgebra& T) const;
};

FrobeniusDescent frobenius_descend(const Poly& f, const TorsorAlgebra& T);

/// With every fiber exponent of f divisible by q: regard x^q as new fiber
/// coordinates and check Δ^{(q)}_i(f) = Δ_{qi}(f) for all i (and that Δ_j(f) = 0
/// for j not divisible by q).
bool twisted_delta_check(const Poly& f, const TorsorAlgebra& T, unsigned long q);

/// Coordinates of Sym^d(U ⊕ V) at a finite truncation: one ring variable per
/// degree-d monomial in the unit labels (shift units first, then fiber units),
/// optionally preceded by inert base variables. Carries the two torsor structures
/// used by the embedding argument: fiber block = pure-fiber-unit coordinates
/// (the shift torsor) and fiber block = pure-shift-unit coordinates (the inner
/// torsor the original form lives on).
class SymShiftModel {
 public:
  SymShiftModel(const FieldPtr& K, unsigned d, std::vector<std::string> shift_units,
                std::vector<std::string> fiber_units,
                std::vector<std::string> extra_base = {});

  unsigned degree() const { return d_; }
  const PolyRingPtr& ring() const { return ring_; }
  const std::vector<std::string>& shift_units() const { return shift_units_; }
  const std::vector<std::string>& fiber_units() const { return fiber_units_; }
  const std::vector<std::string>& units() const { return units_; }

  /// Label exponents (over units, in order) -> coordinate variable name.
  const std::string& coord(const std::vector<unsigned>& label) const;
  const std::vector<std::vector<unsigned>>& labels() const { return labels_; }

  std::vector<std::string> pure_fiber_coords() const;
  std::vector<std::string> pure_shift_coords() const;
  const TorsorAlgebra& shift_torsor() const { return *shift_torsor_; }
  const TorsorAlgebra& inner_torsor() const { return *inner_torsor_; }

 private:
  unsigned d_;
  std::vector<std::string> shift_units_, fiber_units_, units_;
  std::vector<std::vector<unsigned>> labels_;
  std::map<std::vector<unsigned>, std::string> coord_names_;
  PolyRingPtr ring_;
  std::shared_ptr<TorsorAlgebra> shift_torsor_, inner_torsor_;
};

/// Coefficients of the t-expansion of the φ_t = 1 + tφ action on f, where φ sends
/// shift units into fiber units; coefficients[0] = f.
struct PhiExpansion {
  std::vector<Poly> coefficients;

  Poly coefficient(std::size_t i, const SymShiftModel& M) const;
};

using UnitMap = std::map<std::string, std::string>;  // shift unit -> fiber unit

PhiExpansion phi_expand(const Poly& f, const UnitMap& phi, const SymShiftModel& M);

struct WitnessReport {
  bool level_ok = false;     // w ∈ B_{≤1} for the shift torsor
  bool ideal_ok = false;     // w lies in the ideal
  bool identity_ok = false;  // ∂_r w = ∂_{φ*(r)} f on a dual basis of covectors
  std::string detail;

  bool pass() const { return level_ok && ideal_ok && identity_ok; }
};

struct EmbedWitness {
  Poly h;  // ∂_{r0} f in the inner torsor
  Poly w;  // f_d^φ
  WitnessReport report;
};

/// r0 is a covector on the pure-shift coordinates; J generates the ideal of a
/// subvariety that f vanishes on (f ∉ (J) is an error; failed checks are reported,
/// not thrown).
EmbedWitness embed_witness(const Poly& f, const Covector& r0, const UnitMap& phi,
                           const SymShiftModel& M, const std::vector<Poly>& J);

}  // namespace formkit
