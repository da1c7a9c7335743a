#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formkit/groebner.hpp"
#include "formkit/smallfield.hpp"

namespace formkit {

struct StrengthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A homogeneous form of degree >= 2 (or the zero form).
class Form {
 public:
  explicit Form(Poly f);

  const Poly& poly() const { return f_; }
  const PolyRingPtr& ring() const { return f_.ring(); }
  long degree() const { return d_; }
  std::size_t nvars() const { return f_.ring()->vars.size(); }
  bool is_zero() const { return f_.is_zero(); }

 private:
  Poly f_;
  long d_ = 0;
};

/// Multiset of factor-degree pairs {e, d-e}, canonicalized (e <= d-e, sorted).
struct DegreePattern {
  std::vector<std::pair<long, long>> pairs;

  static DegreePattern make(long d, std::vector<long> lows);
  bool operator==(const DegreePattern& o) const { return pairs == o.pairs; }
  bool operator<(const DegreePattern& o) const { return pairs < o.pairs; }
  std::string str() const;
};

/// All patterns with s summands for degree d, sorted by total unknown count in the
/// coefficient system (ascending), then lexicographically.
std::vector<DegreePattern> patterns_for(long d, std::size_t s, std::size_t nvars);

/// Exponent vectors of all degree-`degree` monomials in `nvars` variables, in a
/// fixed (lexicographically decreasing) order.
std::vector<std::vector<unsigned>> monomials_of(long degree, std::size_t nvars);

/// The coefficient-matching system for f = Σ_i g_i h_i with the given pattern:
/// unknowns a{i}_{k} (coefficients of g_i) and b{i}_{k} (coefficients of h_i),
/// indexed against monomials_of; solvable over L iff str_L(f) <= s via this pattern.
struct ThetaSystem {
  PolyRingPtr unknowns;
  std::vector<Poly> equations;
  struct Factor {
    long degree;
    std::vector<std::string> coeff_vars;  // aligned with monomials_of(degree, n)
  };
  std::vector<std::pair<Factor, Factor>> summands;
};

ThetaSystem theta_system(const Form& f, std::size_t s, const DegreePattern& pattern);

enum class LowerReason { AstrBound, RankBound, IrreducibilityBound, Exhaustion };

using Witness = std::vector<std::pair<Poly, Poly>>;

/// True iff Σ g_i h_i = f symbolically.
bool witness_matches(const Form& f, const Witness& w);

struct StrengthCertificate {
  enum class Status { Exact, BoundsOnly };
  Status status = Status::BoundsOnly;
  unsigned long lower = 0;
  LowerReason reason = LowerReason::AstrBound;
  unsigned long upper = 0;
  Witness witness;  // over the base field; multiplies out to f
  FieldPtr field;

  struct Extension {
    FieldPtr field;
    Witness witness;  // over the extension, realizing a smaller strength
  };
  std::optional<Extension> extension;
};

struct AstrResult {
  unsigned long s = 0;
  bool zero_input = false;  // f = 0 returns 0 by convention
  std::optional<DegreePattern> pattern;
};

/// Absolute strength: minimal s with some pattern solvable over the closure.
/// The fast path (quadratics away from characteristic 2) uses ceil(rank/2).
AstrResult astr(const Form& f, bool allow_fast_path = true);

/// Rank of the symmetric Gram matrix of a quadratic form (characteristic != 2).
unsigned long quadratic_rank(const Form& f);

/// Exact strength over a finite field by exhaustive factor enumeration; the budget
/// caps the number of candidate factor tuples (linear solves). On exhaustion the
/// certificate degrades to BoundsOnly.
StrengthCertificate str_exact_finite_field(const Form& f, unsigned long budget = 4000000);

/// Certified bounds over any supported field; Exact when they meet.
StrengthCertificate str_bounds(const Form& f);

/// Search extensions of degree <= degree_budget for one realizing strength <= s;
/// requires astr(f) <= s. Empty result means the budget was exhausted
/// (inconclusive), not that no extension exists.
std::optional<StrengthCertificate::Extension> extension_lift_search(
    const Form& f, unsigned long s, unsigned long degree_budget);

/// str_K(f) <= e * str_L(f) for [L:K] = e; with bounds, checks lower_K <= e*upper_L.
struct InequalityReport {
  unsigned long e = 1;
  StrengthCertificate base, ext;
  bool holds = false;
};

InequalityReport extension_inequality_check(const Form& f, const FieldPtr& L);

/// s' = e*s: str(f) > s' forces astr(f) > s under a degree-e lifting bound.
unsigned long gap_bound(unsigned long e, unsigned long s);

}  // namespace formkit
