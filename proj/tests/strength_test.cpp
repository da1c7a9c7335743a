#include <algorithm>
#include <random>

#include "doctest.h"
#include "formkit/strength.hpp"

using namespace formkit;

namespace {

Form form(const std::string& text, const PolyRingPtr& R) { return Form(parse_poly(text, R)); }

unsigned long binom(unsigned long n, unsigned long k) {
  unsigned long r = 1;
  for (unsigned long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("monomial enumeration") {
  auto m23 = monomials_of(2, 3);
  REQUIRE(m23.size() == 6);
  CHECK(m23.front() == std::vector<unsigned>{2, 0, 0});
  CHECK(m23.back() == std::vector<unsigned>{0, 0, 2});
  for (std::size_t i = 1; i < m23.size(); ++i) CHECK(m23[i - 1] > m23[i]);  // lex decreasing
  CHECK(monomials_of(3, 4).size() == binom(6, 3));
  CHECK(monomials_of(0, 2) == std::vector<std::vector<unsigned>>{{0, 0}});
  CHECK(monomials_of(5, 1).size() == 1);
}

TEST_CASE("degree patterns") {
  CHECK(DegreePattern::make(4, {3}) == DegreePattern::make(4, {1}));
  CHECK(DegreePattern::make(4, {2, 1}).str() == "{(1,3), (2,2)}");
  CHECK_THROWS_AS(DegreePattern::make(4, {0}), StrengthError);
  CHECK_THROWS_AS(DegreePattern::make(3, {3}), StrengthError);

  auto p42 = patterns_for(4, 2, 3);
  REQUIRE(p42.size() == 3);  // multisets of lows from {1, 2}
  // fewest unknowns first: in 3 variables {2,2} needs 24 coefficients, {1,3} pairs more
  CHECK(p42[0] == DegreePattern::make(4, {2, 2}));
  CHECK(patterns_for(3, 2, 3).size() == 1);
  CHECK(patterns_for(2, 3, 4).size() == 1);
  for (const auto& p : patterns_for(6, 2, 2)) CHECK(p.pairs.size() == 2);
  CHECK(patterns_for(6, 2, 2).size() == 6);  // multisets of {1,2,3} of size 2
}

TEST_CASE("coefficient-matching system") {
  auto QQ = Field::rationals();
  auto R = make_ring(QQ, {"x1", "x2"});
  Form f = form("x1^2 + x2^2", R);
  auto pat = DegreePattern::make(2, {1});
  auto sys = theta_system(f, 1, pat);
  REQUIRE(sys.summands.size() == 1);
  CHECK(sys.unknowns->vars ==
        std::vector<std::string>{"a1_0", "a1_1", "b1_0", "b1_1"});
  REQUIRE(sys.equations.size() == 3);  // one per degree-2 monomial
  // x1^2 row: a1_0*b1_0 - 1
  CHECK(sys.equations[0] == parse_poly("a1_0*b1_0 - 1", sys.unknowns));
  CHECK(sys.equations[1] == parse_poly("a1_0*b1_1 + a1_1*b1_0", sys.unknowns));
  CHECK(sys.equations[2] == parse_poly("a1_1*b1_1 - 1", sys.unknowns));
  CHECK(solvable_over_closure(sys.equations));

  CHECK_THROWS_AS(theta_system(f, 2, pat), StrengthError);
}

TEST_CASE("witness check and rank") {
  auto QQ = Field::rationals();
  auto R = make_ring(QQ, {"x1", "x2", "x3"});
  Form f = form("x1^2 - x2^2", R);
  Witness good{{parse_poly("x1 + x2", R), parse_poly("x1 - x2", R)}};
  Witness bad{{parse_poly("x1", R), parse_poly("x1", R)}};
  CHECK(witness_matches(f, good));
  CHECK_FALSE(witness_matches(f, bad));

  CHECK(quadratic_rank(form("x1^2 + x2^2 + x3^2", R)) == 3);
  CHECK(quadratic_rank(form("x1*x2", R)) == 2);
  CHECK(quadratic_rank(form("x1^2 + 2*x1*x2 + x2^2", R)) == 1);  // (x1+x2)^2
  CHECK_THROWS_AS(quadratic_rank(form("x1^3", R)), StrengthError);
  auto R2 = make_ring(Field::prime_field(2), {"x1", "x2"});
  CHECK_THROWS_AS(quadratic_rank(form("x1*x2", R2)), StrengthError);
}

TEST_CASE("absolute strength") {
  auto QQ = Field::rationals();
  auto R = make_ring(QQ, {"x1", "x2"});

  auto a = astr(form("x1^2 + x2^2", R));
  CHECK(a.s == 1);  // rank 2
  CHECK_FALSE(a.zero_input);
  // the closure-solvability route agrees with the rank shortcut
  CHECK(astr(form("x1^2 + x2^2", R), false).s == 1);

  auto R3 = make_ring(QQ, {"x1", "x2", "x3"});
  CHECK(astr(form("x1^2 + x2^2 + x3^2", R3)).s == 2);
  CHECK(astr(form("x1^2 + x2^2 + x3^2", R3), false).s == 2);
  CHECK(astr(Form(Poly(R))).zero_input);
  CHECK(astr(Form(Poly(R))).s == 0);

  auto K = parse_field_spec("GF(2)(t1,t2)");
  auto Rt = make_ring(K, {"x1", "x2"});
  CHECK(astr(form("t1*x1^2 + t2*x2^2", Rt)).s == 1);

  auto R4 = make_ring(Field::prime_field(2), {"x1", "x2", "x3", "x4"});
  auto a2 = astr(form("x1*x2 + x3*x4", R4));
  CHECK(a2.s == 2);
  REQUIRE(a2.pattern.has_value());
  CHECK(*a2.pattern == DegreePattern::make(2, {1, 1}));
}

TEST_CASE("exact strength over small fields") {
  auto GF2 = Field::prime_field(2);
  auto R4 = make_ring(GF2, {"x1", "x2", "x3", "x4"});

  auto c = str_exact_finite_field(form("x1*x2 + x3*x4", R4));
  CHECK(c.status == StrengthCertificate::Status::Exact);
  CHECK(c.lower == 2);
  CHECK(c.upper == 2);
  CHECK(witness_matches(form("x1*x2 + x3*x4", R4), c.witness));

  auto R2 = make_ring(GF2, {"x1", "x2"});
  auto sq = str_exact_finite_field(form("x1^2 + x2^2", R2));
  CHECK(sq.lower == 1);  // (x1 + x2)^2 in characteristic 2
  CHECK(witness_matches(form("x1^2 + x2^2", R2), sq.witness));

  auto GF3 = Field::prime_field(3);
  auto S = make_ring(GF3, {"x1", "x2"});
  auto cube = str_exact_finite_field(form("x1^3 + x2^3", S));
  CHECK(cube.lower == 1);  // (x1 + x2)^3
  CHECK(cube.status == StrengthCertificate::Status::Exact);

  auto nsq = str_exact_finite_field(form("x1^2 + x2^2", S));
  CHECK(nsq.lower == 2);  // -1 is not a square mod 3
  CHECK(nsq.status == StrengthCertificate::Status::Exact);

  auto GF5 = Field::prime_field(5);
  auto T = make_ring(GF5, {"x1", "x2"});
  auto five = str_exact_finite_field(form("x1^2 + x2^2", T));
  CHECK(five.lower == 1);  // 2^2 = -1 mod 5
  CHECK(witness_matches(form("x1^2 + x2^2", T), five.witness));

  CHECK(str_exact_finite_field(Form(Poly(R2))).upper == 0);
  auto QR = make_ring(Field::rationals(), {"x1"});
  CHECK_THROWS_AS(str_exact_finite_field(form("x1^2", QR)), StrengthError);
}

TEST_CASE("budget exhaustion degrades to bounds") {
  auto GF2 = Field::prime_field(2);
  auto R = make_ring(GF2, {"x1", "x2", "x3"});
  Form f = form("x1^2*x2 + x1*x2*x3 + x3^3", R);
  auto tight = str_exact_finite_field(f, 1);
  CHECK(tight.status == StrengthCertificate::Status::BoundsOnly);
  CHECK(tight.lower == 1);
  CHECK(tight.upper >= tight.lower);
  CHECK(witness_matches(f, tight.witness));
  auto full = str_exact_finite_field(f);
  CHECK(full.status == StrengthCertificate::Status::Exact);
  CHECK(full.lower >= tight.lower);
  CHECK(full.upper <= tight.upper);
}

TEST_CASE("strength bounds over the rationals") {
  auto QQ = Field::rationals();
  auto R = make_ring(QQ, {"x1", "x2"});

  auto c = str_bounds(form("x1^2 + x2^2", R));
  CHECK(c.status == StrengthCertificate::Status::Exact);
  CHECK(c.lower == 2);  // irreducible over QQ, so no single-product expression
  CHECK(c.reason == LowerReason::IrreducibilityBound);
  CHECK(witness_matches(form("x1^2 + x2^2", R), c.witness));

  auto split = str_bounds(form("x1^2 - x2^2", R));
  CHECK(split.status == StrengthCertificate::Status::Exact);
  CHECK(split.lower == 1);
  CHECK(witness_matches(form("x1^2 - x2^2", R), split.witness));

  auto R3 = make_ring(QQ, {"x1", "x2", "x3"});
  auto rk3 = str_bounds(form("x1^2 + x2^2 + x3^2", R3));
  CHECK(rk3.lower == 2);
  CHECK(rk3.reason == LowerReason::RankBound);
  CHECK(rk3.upper >= rk3.lower);
}

TEST_CASE("strength bounds over function fields") {
  auto K = parse_field_spec("GF(2)(t1,t2)");
  auto R = make_ring(K, {"x1", "x2"});
  Form f = form("t1*x1^2 + t2*x2^2", R);
  auto c = str_bounds(f);
  CHECK(c.status == StrengthCertificate::Status::Exact);
  CHECK(c.lower == 2);  // t2/t1 is not a square in GF(2)(t1,t2)
  CHECK(c.upper == 2);
  CHECK(c.reason == LowerReason::IrreducibilityBound);
  CHECK(witness_matches(f, c.witness));

  Form g = form("t1^2*x1^2 + t2^2*x2^2", R);
  auto cg = str_bounds(g);
  CHECK(cg.lower == 1);  // (t1 x1 + t2 x2)^2
  CHECK(witness_matches(g, cg.witness));

  // finite-field inputs dispatch to the exact enumeration
  auto GF2 = Field::prime_field(2);
  auto R4 = make_ring(GF2, {"x1", "x2", "x3", "x4"});
  auto viaBounds = str_bounds(form("x1*x2 + x3*x4", R4));
  CHECK(viaBounds.status == StrengthCertificate::Status::Exact);
  CHECK(viaBounds.lower == 2);
}

TEST_CASE("extension lift search") {
  auto QQ = Field::rationals();
  auto R = make_ring(QQ, {"x1", "x2"});
  Form f = form("x1^2 + x2^2", R);

  auto ext = extension_lift_search(f, 1, 2);
  REQUIRE(ext.has_value());
  CHECK(ext->field->has_generator("i"));
  CHECK(ext->field->degree_over(*QQ) == 2);
  REQUIRE(ext->witness.size() == 1);
  Form fL(f.poly().coefficients_into(make_ring(ext->field, R->vars)));
  CHECK(witness_matches(fL, ext->witness));

  // already attained over the base field: no proper extension needed
  auto easy = extension_lift_search(form("x1^2 - x2^2", R), 1, 2);
  REQUIRE(easy.has_value());
  CHECK(easy->field->same_as(*QQ));

  CHECK_THROWS_AS(extension_lift_search(f, 0, 2), StrengthError);
}

TEST_CASE("extension lift search in positive characteristic") {
  auto K = parse_field_spec("GF(2)(t1,t2)");
  auto R = make_ring(K, {"x1", "x2"});
  Form f = form("t1*x1^2 + t2*x2^2", R);

  auto ext = extension_lift_search(f, 1, 2);
  REQUIRE(ext.has_value());
  CHECK(ext->field->degree_over(*K) == 2);
  REQUIRE(ext->witness.size() == 1);
  Form fL(f.poly().coefficients_into(make_ring(ext->field, R->vars)));
  CHECK(witness_matches(fL, ext->witness));
  // the adjoined root squares to a coefficient ratio
  auto r = ext->field->generator(ext->field->layers().back().name);
  bool ratio = r * r == parse_field_element("t2/t1", ext->field) ||
               r * r == parse_field_element("t1/t2", ext->field);
  CHECK(ratio);

  auto GF3 = Field::prime_field(3);
  auto S = make_ring(GF3, {"x1", "x2"});
  auto e9 = extension_lift_search(form("x1^2 + x2^2", S), 1, 2);
  REQUIRE(e9.has_value());
  CHECK(e9->field->finite_order() == 9ul);
  CHECK(e9->witness.size() == 1);
}

TEST_CASE("base versus extension inequality") {
  auto QQ = Field::rationals();
  auto R = make_ring(QQ, {"x1", "x2"});
  Form f = form("x1^2 + x2^2", R);
  auto Qi = Field::with_algebraic(QQ, "i",
                                  {QQ->one(), QQ->zero(), QQ->one()});
  auto rep = extension_inequality_check(f, Qi);
  CHECK(rep.e == 2);
  CHECK(rep.base.lower == 2);
  CHECK(rep.ext.upper == 1);
  CHECK(rep.holds);

  auto GF3 = Field::prime_field(3);
  auto S = make_ring(GF3, {"x1", "x2"});
  auto e9 = extension_lift_search(form("x1^2 + x2^2", S), 1, 2);
  REQUIRE(e9.has_value());
  auto rep9 = extension_inequality_check(form("x1^2 + x2^2", S), e9->field);
  CHECK(rep9.e == 2);
  CHECK(rep9.base.lower == 2);
  CHECK(rep9.ext.lower == 1);
  CHECK(rep9.holds);

  CHECK(gap_bound(2, 3) == 6);
  CHECK_THROWS_AS(extension_inequality_check(f, Field::prime_field(5)), StrengthError);
}

TEST_CASE("random cubic certificates are consistent") {
  auto GF2 = Field::prime_field(2);
  auto R = make_ring(GF2, {"x1", "x2", "x3"});
  auto GF4 = [] {
    auto b = Field::prime_field(2);
    return Field::with_algebraic(b, "w", {b->one(), b->one(), b->one()});
  }();
  auto R4 = make_ring(GF4, R->vars);

  std::mt19937 rng(7);
  auto mons = monomials_of(3, 3);
  int checked = 0;
  while (checked < 12) {
    Poly f(R);
    for (const auto& m : mons)
      if (rng() & 1u) f.add_term(m, GF2->one());
    if (f.is_zero()) continue;
    ++checked;
    Form F(f);
    auto c = str_exact_finite_field(F);
    CHECK(c.status == StrengthCertificate::Status::Exact);
    CHECK(c.lower == c.upper);
    CHECK(witness_matches(F, c.witness));
    for (const auto& [g, h] : c.witness) {
      CHECK(g.total_degree() + h.total_degree() == 3);
      CHECK(g.total_degree() >= 1);
    }
    // strength can only drop under field extension
    auto c4 = str_exact_finite_field(Form(f.coefficients_into(R4)));
    CHECK(c4.lower <= c.lower);
    CHECK(astr(F).s <= c4.lower);
  }
}
