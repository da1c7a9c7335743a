#pragma once

#include <string>
#include <vector>

#include "formkit/groebner.hpp"

namespace formkit {

struct GLCaseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A polynomial functor shape evaluated at finite levels: symmetric powers,
/// Frobenius twists (degree multiplied by q), and direct sums.
class LevelSpace {
 public:
  static LevelSpace sym(unsigned a);
  static LevelSpace twist(LevelSpace inner, unsigned q);
  static LevelSpace sum(std::vector<LevelSpace> parts);

  unsigned long degree() const;
  unsigned long dimension(std::size_t n) const;
  /// Deterministic basis labels at level n: monomial labels for symmetric powers,
  /// q-decorated labels for twists; length equals dimension(n).
  std::vector<std::string> basis(std::size_t n) const;

 private:
  enum class Kind { Sym, Twist, Sum };
  Kind kind_ = Kind::Sym;
  unsigned a_ = 0;  // Sym exponent
  unsigned q_ = 1;  // twist amount
  std::vector<LevelSpace> parts_;  // twist inner (single) or sum parts
};

/// Graded pieces of Sym^a(K^m ⊕ K^n) by degree i in the first block.
struct ShiftPiece {
  unsigned i = 0;
  unsigned long dim_first = 0;   // dim Sym^i at level m
  unsigned long dim_second = 0;  // dim Sym^{a-i} at level n
  unsigned long dim = 0;         // product
};

std::vector<ShiftPiece> shift_decompose(unsigned a, std::size_t m, std::size_t n);

/// Coordinates and defining ideal, at level n over GF(2), of the subvariety of
/// A(V^(2)) x A(Sym^4 V) cut out by squaring relations: z-variables are the
/// twisted coordinates, w-variables the Sym^4 coordinates (w_ijkl = coefficient
/// of e_i e_j e_k e_l).
struct NsIdeal {
  PolyRingPtr ring;  // z_1..z_n followed by the w-variables
  std::vector<std::string> z_vars, w_vars;
  std::vector<Poly> gens;
};

/// Generators obtained by formally expanding [v^2]^2 - [v^4] with v = sum c_i e_i
/// over parameters c and extracting coefficients of the c-monomials.
NsIdeal ns_example_ideal(std::size_t n);

/// [v^2]^2 - [v^4] for a concrete vector v = sum v_i e_i, by direct expansion in
/// the ideal's coordinate ring. The ideal's generator span contains every such
/// element (its GL-stability at this level).
Poly ns_example_generator(const NsIdeal& I, const std::vector<FieldElem>& v);

struct NsReport {
  bool injective = false;     // eliminating the z-variables leaves the zero ideal
  bool f_surjective = false;  // squares of all coordinates lie in the w-subalgebra mod I
  std::string detail;

  bool pass() const { return injective && f_surjective; }
};

NsReport ns_example_check(std::size_t n);

}  // namespace formkit
