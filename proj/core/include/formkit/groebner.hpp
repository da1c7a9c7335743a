#pragma once

#include <vector>

#include "formkit/poly.hpp"

namespace formkit {

/// Degree-reverse-lexicographic order, optionally with a leading elimination block:
/// the first `split` variables dominate (block order), each block compared grevlex.
struct MonomialOrder {
  std::size_t split = 0;

  bool less(const std::vector<unsigned>& a, const std::vector<unsigned>& b) const;
  bool greater(const std::vector<unsigned>& a, const std::vector<unsigned>& b) const {
    return less(b, a);
  }
};

class GroebnerBasis {
 public:
  GroebnerBasis() = default;
  GroebnerBasis(PolyRingPtr ring, MonomialOrder order, std::vector<Poly> basis,
                std::vector<Poly> original)
      : ring_(std::move(ring)), order_(order), basis_(std::move(basis)),
        original_(std::move(original)) {}

  const PolyRingPtr& ring() const { return ring_; }
  const MonomialOrder& order() const { return order_; }
  const std::vector<Poly>& generators() const { return basis_; }
  const std::vector<Poly>& original_generators() const { return original_; }

  /// True when the basis is {1} (the whole ring; no common zeros anywhere).
  bool is_trivial() const;
  /// True when the ideal is {0}.
  bool is_zero_ideal() const { return basis_.empty(); }

 private:
  PolyRingPtr ring_;
  MonomialOrder order_;
  std::vector<Poly> basis_;
  std::vector<Poly> original_;
};

GroebnerBasis buchberger(const std::vector<Poly>& gens, MonomialOrder order = {});

/// Fully reduced remainder of f modulo G.
Poly normal_form(const Poly& f, const GroebnerBasis& G);

bool ideal_member(const Poly& f, const GroebnerBasis& G);

/// Weak Nullstellensatz: the system has a common zero over the algebraic closure
/// iff the ideal is proper.
bool solvable_over_closure(const std::vector<Poly>& gens);

/// Gröbner basis of the elimination ideal in the kept variables, computed from the
/// original generators under a block order with the dropped variables first. The
/// result lives in the smaller ring on `keep`.
GroebnerBasis eliminate(const GroebnerBasis& G, const std::vector<std::string>& keep);

/// True iff some power of f lies in the ideal (Rabinowitsch: 1 in (gens, 1 - u f)).
bool radical_member(const Poly& f, const std::vector<Poly>& gens);

}  // namespace formkit
