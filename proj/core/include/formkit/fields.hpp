#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "formkit/ratfunc.hpp"

namespace formkit {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raw coordinates of a tower element over the algebraic-generator basis:
/// exponent vector (one slot per algebraic generator) -> rational function in the
/// transcendentals. Exponent vectors may be shorter than the full generator list
/// when an element only involves lower layers.
using RawCoords = std::map<std::vector<unsigned>, RatFunc>;

class FieldElem;

struct LayerInfo {
  enum class Kind { Transcendental, Algebraic, PthRoot };
  Kind kind;
  std::string name;
  std::string detail;  // minimal polynomial / root target, printable form
};

/// An exact field tower: prime field, transcendentals, algebraic layers, p-th roots.
/// Immutable; extensions build new Field values sharing nothing mutable.
class Field : public std::enable_shared_from_this<Field> {
 public:
  struct AlgLayer {
    std::string name;
    unsigned degree = 0;           // basis 1, g, ..., g^{degree-1}
    bool from_pth_root = false;
    unsigned pth_power = 0;        // q for p-th root layers
    std::vector<RawCoords> minpoly;  // c_0..c_{degree-1} of the monic minimal polynomial
    RawCoords rewrite;             // g^degree expressed over gens <= this layer (own exp < degree)
  };

  static FieldPtr rationals();
  static FieldPtr prime_field(long p);
  static FieldPtr with_transcendental(const FieldPtr& base, const std::string& name);
  /// minpoly_coeffs: c_0..c_d with c_d invertible, coefficients over `base`.
  /// Verifies irreducibility over the base tower; throws FieldError if reducible or
  /// if the check is unsupported for this tower shape.
  static FieldPtr with_algebraic(const FieldPtr& base, const std::string& gen,
                                 const std::vector<FieldElem>& minpoly_coeffs);
  /// Adjoin r with r^q = target, q a power of the characteristic. Requires target
  /// not to be a p-th power (which makes x^q - target irreducible).
  static FieldPtr with_pth_root(const FieldPtr& base, const std::string& gen,
                                const FieldElem& target, unsigned q);
  /// Adjoin q-th roots of every tower generator (the full K^{1/q} layer).
  static FieldPtr with_pth_root_layer(const FieldPtr& base, unsigned q);

  long characteristic() const { return p_; }
  const std::vector<std::string>& transcendentals() const { return trans_; }
  const std::vector<AlgLayer>& algebraic_layers() const { return algs_; }
  const std::vector<LayerInfo>& layers() const { return layers_; }

  bool is_prime_field() const { return trans_.empty() && algs_.empty(); }
  /// Finite cardinality (p^D) when the tower has no transcendentals, else nullopt.
  std::optional<unsigned long> finite_order() const;
  /// Dimension over the prime-field(t_1,...,t_m) rational base.
  unsigned long algebraic_dimension() const;

  /// Structural equality (same characteristic, generators, relations).
  bool same_as(const Field& o) const;
  static bool compatible(const FieldPtr& a, const FieldPtr& b) {
    return a.get() == b.get() || a->same_as(*b);
  }
  /// True if this tower is a layer-prefix extension target of k (k's generators come first).
  bool extends(const Field& k) const;
  /// Finite extension degree over subfield k; nullopt if not a prefix or not finite.
  std::optional<unsigned long> degree_over(const Field& k) const;

  FieldElem zero() const;
  FieldElem one() const;
  FieldElem from_integer(long v) const;
  FieldElem from_scalar(const Scalar& s) const;
  FieldElem generator(const std::string& name) const;  // transcendental or algebraic
  bool has_generator(const std::string& name) const;
  std::vector<std::string> generator_names() const;

  /// Deterministic enumeration of all elements of a finite tower.
  std::vector<FieldElem> enumerate_elements() const;

  /// (p, c) with c = [K:K^p]; (0, 1) in characteristic zero. c is recomputed from the
  /// Frobenius images of a basis, not assumed from the layer structure.
  std::pair<long, unsigned long> p_degree() const;

  std::string spec_string() const { return spec_; }

  /// Exponent vectors of the multiplicative basis over the rational base
  /// (all tuples below the layer degrees), in a fixed deterministic order.
  std::vector<std::vector<unsigned>> basis_exponents() const;

  /// Drop the top algebraic layer (keeping all transcendentals); requires one.
  FieldPtr without_top_algebraic() const;

 private:
  friend class FieldElem;
  Field() = default;

  // b^p for every basis monomial b, as columns of coordinates.
  std::vector<FieldElem> basis_frobenius() const;

  long p_ = 0;
  std::vector<std::string> trans_;
  std::vector<AlgLayer> algs_;
  std::vector<LayerInfo> layers_;
  std::string spec_;
};

/// Element of a Field tower, canonical: coordinates over the algebraic basis with
/// gcd-reduced, denominator-normalized rational functions in the transcendentals.
class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(FieldPtr field, RawCoords coords);

  const FieldPtr& field() const { return field_; }
  const RawCoords& coords() const { return coords_; }

  bool is_zero() const { return coords_.empty(); }
  bool is_one() const;
  /// True if the element lies in the rational base (no algebraic generators).
  bool is_rational_base() const;
  /// The rational-base value (requires is_rational_base()).
  RatFunc rational_value() const;

  FieldElem zero_like() const;
  FieldElem one_like() const;

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator-() const;
  FieldElem inverse() const;
  FieldElem operator/(const FieldElem& o) const { return *this * o.inverse(); }
  FieldElem pow(unsigned long e) const;

  bool operator==(const FieldElem& o) const;
  bool operator!=(const FieldElem& o) const { return !(*this == o); }
  bool operator<(const FieldElem& o) const;  // canonical total order

  /// Move this element into an extension tower L of its field.
  FieldElem embed_into(const FieldPtr& target) const;
  /// Restrict to a subfield (throws if coordinates leave it).
  FieldElem restrict_to(const FieldPtr& target) const;

  std::string str() const;

 private:
  friend class Field;
  void reduce();

  FieldPtr field_;
  RawCoords coords_;
};

/// y with y^q = x, if it exists; q must be 1 or a power of the characteristic.
std::optional<FieldElem> is_qth_power(const FieldElem& x, unsigned long q);

/// e = d * c^k for q = p^k (q = 1 gives k = 0). Throws if q is not a characteristic power.
unsigned long lift_degree_bound(unsigned long d, unsigned long q, unsigned long c, long p);

/// Three-valued square-root search (characteristic != 2 towers may be undecidable
/// for unsupported shapes; characteristic 2 is exact via Frobenius).
struct SqrtResult {
  enum class Status { Found, NotASquare, Unknown } status;
  std::optional<FieldElem> root;
};
SqrtResult sqrt_in_field(const FieldElem& x);

/// Parse the field-spec grammar:
///   QQ | GF(p) | <field>(v1,...,vk) | <field>[g]/(m(g)) | <field>^(1/q)
FieldPtr parse_field_spec(const std::string& spec);

/// Parse a field-element literal (arithmetic over the tower generators).
FieldElem parse_field_element(const std::string& text, const FieldPtr& K);

}  // namespace formkit
