#include <random>

#include "doctest.h"
#include "formkit/torsor.hpp"

using namespace formkit;

namespace {

Poly rand_poly(std::mt19937& rng, const PolyRingPtr& R, int max_terms, int max_deg) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> expo(0, max_deg);
  long p = R->field->characteristic();
  std::uniform_int_distribution<long> coef(p == 0 ? -3 : 0, p == 0 ? 3 : p - 1);
  Poly f(R);
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    std::vector<unsigned> e(R->vars.size(), 0);
    int budget = max_deg;
    for (auto& x : e) {
      int v = std::min(budget, expo(rng));
      x = static_cast<unsigned>(v);
      budget -= v;
    }
    f.add_term(e, R->field->from_integer(coef(rng)));
  }
  return f;
}

Poly drop_shadows(const Poly& df, const TorsorAlgebra& T) {
  std::vector<Poly> images;
  for (const auto& v : T.ring()->vars) images.push_back(Poly::variable(T.ring(), v));
  for (std::size_t i = 0; i < T.shadow_vars().size(); ++i) images.push_back(Poly(T.ring()));
  return df.substitute(images);
}

}  // namespace

TEST_CASE("comultiplication components") {
  auto QQ = parse_field_spec("QQ");
  auto T = make_torsor(QQ, {"a", "b"}, {"x"});
  auto R = T.ring();
  auto E = T.extended_ring();

  auto d1 = delta(parse_poly("x^2", R), T);
  REQUIRE(d1.components.size() == 3);
  CHECK(d1.component(0, T) == parse_poly("x^2", E));
  CHECK(d1.component(1, T) == parse_poly("2*x*x_y", E));
  CHECK(d1.component(2, T) == parse_poly("x_y^2", E));

  auto d2 = delta(parse_poly("a*x + b", R), T);
  REQUIRE(d2.components.size() == 2);
  CHECK(d2.component(0, T) == parse_poly("a*x + b", E));
  CHECK(d2.component(1, T) == parse_poly("a*x_y", E));

  auto F2 = parse_field_spec("GF(2)");
  auto T2 = make_torsor(F2, {}, {"x"});
  auto dc = delta(parse_poly("x^2", T2.ring()), T2);
  REQUIRE(dc.components.size() == 2);
  CHECK(dc.component(2, T2) == parse_poly("x_y^2", T2.extended_ring()));

  CHECK_THROWS_AS(delta(parse_poly("a", make_ring(QQ, {"a"})), T), TorsorError);
}

TEST_CASE("counit and coassociativity") {
  std::mt19937 rng(11);
  for (const char* spec : {"QQ", "GF(2)", "GF(3)"}) {
    auto K = parse_field_spec(spec);
    auto T = make_torsor(K, {"a"}, {"x1", "x2"});
    for (int i = 0; i < 30; ++i) {
      Poly f = rand_poly(rng, T.ring(), 5, 4);
      auto d = delta(f, T);
      CHECK(drop_shadows(d.assemble(T), T) == f);
      // homogeneity of each component in the shadow block
      std::size_t n = T.ring()->vars.size();
      for (const auto& [deg, comp] : d.components) {
        for (const auto& [e, c] : comp.terms()) {
          (void)c;
          long sd = 0;
          for (std::size_t k = n; k < e.size(); ++k) sd += e[k];
          CHECK(sd == deg);
        }
      }
      // coassociativity: translating twice equals translating by the sum
      Poly once = double_substitute(f, {{"x1", "y1"}, {"x2", "y2"}});
      Poly lhs = double_substitute(once, {{"y1", "z1"}, {"y2", "z2"}});
      Poly rhs = double_substitute(once, {{"x1", "z1"}, {"x2", "z2"}});
      // both live in rings on (a,x1,x2,y1,y2,z1,z2); compare after aligning variables
      auto align = [&](const Poly& g) {
        auto target = make_ring(K, {"a", "x1", "x2", "y1", "y2", "z1", "z2"});
        std::vector<Poly> images;
        for (const auto& v : g.ring()->vars) images.push_back(Poly::variable(target, v));
        return g.substitute(images);
      };
      CHECK(align(lhs) == align(rhs));
    }
  }
}

TEST_CASE("directional derivatives") {
  auto QQ = parse_field_spec("QQ");
  auto T = make_torsor(QQ, {}, {"x"});
  CHECK(directional_derivative(parse_poly("x^2", T.ring()), {{"x", QQ->one()}}, T) ==
        parse_poly("2*x", T.ring()));

  auto T2 = make_torsor(QQ, {}, {"x1", "x2"});
  Covector r{{"x1", QQ->one()}, {"x2", QQ->zero()}};
  CHECK(directional_derivative(parse_poly("x1*x2", T2.ring()), r, T2) ==
        parse_poly("x2", T2.ring()));

  auto F3 = parse_field_spec("GF(3)");
  auto T3 = make_torsor(F3, {}, {"x"});
  CHECK(directional_derivative(parse_poly("x^3", T3.ring()), {{"x", F3->one()}}, T3)
            .is_zero());

  CHECK_THROWS_AS(directional_derivative(parse_poly("x", T.ring()), {{"q", QQ->one()}}, T),
                  TorsorError);

  // first-order expansion: the t-linear part of f(x + t r) is ∂_r f
  std::mt19937 rng(23);
  auto K = parse_field_spec("GF(5)");
  auto T5 = make_torsor(K, {"a"}, {"x1", "x2"});
  auto Rt = make_ring(K, {"a", "x1", "x2", "tt"});
  for (int i = 0; i < 20; ++i) {
    Poly f = rand_poly(rng, T5.ring(), 5, 3);
    Covector rv{{"x1", K->from_integer(static_cast<long>(rng() % 5))},
                {"x2", K->from_integer(static_cast<long>(rng() % 5))}};
    std::vector<Poly> images{parse_poly("a", Rt),
                             parse_poly("x1", Rt) + Poly::variable(Rt, "tt") * rv["x1"],
                             parse_poly("x2", Rt) + Poly::variable(Rt, "tt") * rv["x2"]};
    Poly moved = f.substitute(images);
    Poly tpart(Rt);
    for (const auto& [e, c] : moved.terms())
      if (e[3] == 1) tpart.add_term({e[0], e[1], e[2], 0}, c);
    std::vector<Poly> back{parse_poly("a", Rt), parse_poly("x1", Rt),
                           parse_poly("x2", Rt)};
    CHECK(tpart == directional_derivative(f, rv, T5).substitute(back));
  }
}

TEST_CASE("filtration level and initial part") {
  auto QQ = parse_field_spec("QQ");
  auto T = make_torsor(QQ, {"a", "b"}, {"x"});
  auto R = T.ring();
  CHECK(filtration_level(parse_poly("a + b*x", R), T) == 1);
  CHECK(init_part(parse_poly("a + b*x", R), T) == parse_poly("b*x", R));
  CHECK(filtration_level(parse_poly("x^2 + x", R), T) == 2);
  CHECK(init_part(parse_poly("x^2 + x", R), T) == parse_poly("x^2", R));
  CHECK(filtration_level(parse_poly("a^3*b + a", R), T) == 0);
  CHECK(init_part(parse_poly("a^3*b + a", R), T) == parse_poly("a^3*b + a", R));
  CHECK_THROWS_AS(filtration_level(Poly(R), T), TorsorError);

  // multiplicativity of the initial part over a domain base
  std::mt19937 rng(37);
  for (const char* spec : {"QQ", "GF(3)"}) {
    auto K = parse_field_spec(spec);
    auto TD = make_torsor(K, {"a", "b"}, {"x1", "x2"});
    for (int i = 0; i < 25; ++i) {
      Poly f = rand_poly(rng, TD.ring(), 4, 3);
      Poly g = rand_poly(rng, TD.ring(), 4, 3);
      if (f.is_zero() || g.is_zero()) continue;
      CHECK(filtration_level(f * g, TD) ==
            filtration_level(f, TD) + filtration_level(g, TD));
      CHECK(init_part(f * g, TD) == init_part(f, TD) * init_part(g, TD));
    }
  }
}

TEST_CASE("frobenius descent") {
  auto F2 = parse_field_spec("GF(2)");
  auto T = make_torsor(F2, {"a", "b"}, {"x"});
  auto R = T.ring();

  auto d1 = frobenius_descend(parse_poly("x^2", R), T);
  CHECK(d1.q == 2);
  REQUIRE(d1.rewrite.size() == 1);
  CHECK(d1.rewrite[0].first == parse_poly("1", R));
  CHECK(d1.rewrite[0].second == parse_poly("x", R));

  auto d2 = frobenius_descend(parse_poly("a*x^2 + b*x^4", R), T);
  CHECK(d2.q == 2);
  REQUIRE(d2.rewrite.size() == 2);
  CHECK(d2.assemble(T) == parse_poly("a*x^2 + b*x^4", R));

  auto d3 = frobenius_descend(parse_poly("x^2 + x", R), T);
  CHECK(d3.q == 1);
  CHECK(d3.assemble(T) == parse_poly("x^2 + x", R));

  CHECK_THROWS_AS(frobenius_descend(parse_poly("a*b", R), T), TorsorError);

  auto QQ = parse_field_spec("QQ");
  auto TQ = make_torsor(QQ, {"a"}, {"x"});
  auto dq = frobenius_descend(parse_poly("x^4", TQ.ring()), TQ);
  CHECK(dq.q == 1);
  CHECK(dq.assemble(TQ) == parse_poly("x^4", TQ.ring()));

  // property: q is a p-power, reconstruction is exact, Δ_q ≠ 0 and Δ_i = 0 below it
  std::mt19937 rng(53);
  for (const char* spec : {"GF(2)", "GF(3)"}) {
    auto K = parse_field_spec(spec);
    long p = K->characteristic();
    auto TP = make_torsor(K, {"a"}, {"x1", "x2"});
    for (int i = 0; i < 30; ++i) {
      Poly f = rand_poly(rng, TP.ring(), 4, 6);
      if (TP.is_base_only(f)) continue;
      auto de = frobenius_descend(f, TP);
      unsigned long q = de.q;
      while (q % static_cast<unsigned long>(p) == 0) q /= static_cast<unsigned long>(p);
      CHECK(q == 1);
      CHECK(de.assemble(TP) == f);
      auto comp = delta(f, TP);
      CHECK(!comp.component(static_cast<long>(de.q), TP).is_zero());
      for (long j = 1; j < static_cast<long>(de.q); ++j)
        CHECK(comp.component(j, TP).is_zero());
      for (const auto& [a, b] : de.rewrite) {
        CHECK(TP.is_base_only(a));
        (void)b;
      }
      CHECK(twisted_delta_check(f, TP, de.q));
    }
  }
}

TEST_CASE("twisted comultiplication") {
  auto F2 = parse_field_spec("GF(2)");
  auto T = make_torsor(F2, {"a"}, {"x"});
  auto R = T.ring();
  CHECK(twisted_delta_check(parse_poly("x^2", R), T, 2));
  CHECK(twisted_delta_check(parse_poly("x^4", R), T, 2));
  CHECK(twisted_delta_check(parse_poly("a*x^4 + x^2", R), T, 2));
  CHECK(twisted_delta_check(parse_poly("a^3 + a", R), T, 2));  // vacuous
  CHECK_THROWS_AS(twisted_delta_check(parse_poly("x^3", R), T, 2), TorsorError);
}

TEST_CASE("symmetric shift model coordinates") {
  auto QQ = parse_field_spec("QQ");
  SymShiftModel M(QQ, 2, {"u"}, {"e1", "e2"});
  CHECK(M.labels().size() == 6);  // C(2+3-1, 2)
  CHECK(M.coord({2, 0, 0}) == "z_u_u");
  CHECK(M.coord({1, 1, 0}) == "z_u_e1");
  CHECK(M.coord({0, 0, 2}) == "z_e2_e2");
  CHECK(M.pure_fiber_coords() == std::vector<std::string>{"z_e1_e1", "z_e1_e2", "z_e2_e2"});
  CHECK(M.pure_shift_coords() == std::vector<std::string>{"z_u_u"});

  SymShiftModel M3(QQ, 3, {"u"}, {"e"});
  CHECK(M3.labels().size() == 4);
}

TEST_CASE("phi expansion") {
  auto QQ = parse_field_spec("QQ");
  SymShiftModel M(QQ, 2, {"u"}, {"e1", "e2"});
  auto R = M.ring();
  UnitMap phi{{"u", "e1"}};

  auto ex = phi_expand(parse_poly("z_u_u", R), phi, M);
  REQUIRE(ex.coefficients.size() == 3);
  CHECK(ex.coefficients[0] == parse_poly("z_u_u", R));
  CHECK(ex.coefficients[1] == parse_poly("2*z_u_e1", R));
  CHECK(ex.coefficients[2] == parse_poly("z_e1_e1", R));

  auto fixed = phi_expand(parse_poly("z_e1_e2", R), phi, M);
  CHECK(fixed.coefficients.size() == 1);

  auto sq = phi_expand(parse_poly("z_u_u^2", R), phi, M);
  CHECK(sq.coefficients.size() == 5);
  CHECK(sq.coefficients[4] == parse_poly("z_e1_e1^2", R));

  CHECK_THROWS_AS(phi_expand(parse_poly("z_u_u", R), UnitMap{{"e1", "e2"}}, M), TorsorError);

  // char 2: the cross term of the squared unit vanishes
  auto F2 = parse_field_spec("GF(2)");
  SymShiftModel M2(F2, 2, {"u"}, {"e1"});
  auto ex2 = phi_expand(parse_poly("z_u_u", M2.ring()), UnitMap{{"u", "e1"}}, M2);
  REQUIRE(ex2.coefficients.size() == 3);
  CHECK(ex2.coefficients[1].is_zero());
  CHECK(ex2.coefficients[2] == parse_poly("z_e1_e1", M2.ring()));
}

TEST_CASE("embedding witness") {
  auto QQ = parse_field_spec("QQ");
  SymShiftModel M(QQ, 2, {"u"}, {"e1", "e2"});
  auto R = M.ring();
  UnitMap phi{{"u", "e1"}};
  Covector r0{{"z_u_u", QQ->one()}};

  // the origin: its ideal is generated by all coordinates and is stable
  std::vector<Poly> J0;
  for (const auto& v : R->vars) J0.push_back(Poly::variable(R, v));
  Poly f = parse_poly("5*z_u_u", R);
  auto wit = embed_witness(f, r0, phi, M, J0);
  CHECK(wit.report.pass());
  CHECK(wit.h == parse_poly("5", R));
  CHECK(wit.w == parse_poly("5*z_e1_e1", R));

  // forms must live on the inner block only
  CHECK_THROWS_AS(embed_witness(parse_poly("z_u_e1", R), r0, phi, M, J0), TorsorError);
  // and must lie in the ideal
  CHECK_THROWS_AS(embed_witness(parse_poly("z_u_u + 1", R), r0, phi, M, J0), TorsorError);

  // rank-one locus of the symmetric form: 2x2-minor ideal, stable and with a
  // nonzero inner-block member once there are two shift units
  SymShiftModel M2(QQ, 2, {"u1", "u2"}, {"e1", "e2"});
  auto R2 = M2.ring();
  std::vector<Poly> minors;
  auto z = [&](unsigned a, unsigned b) {
    std::vector<unsigned> lab(4, 0);
    ++lab[a];
    ++lab[b];
    return Poly::variable(R2, M2.coord(lab));
  };
  for (unsigned a = 0; a < 4; ++a)
    for (unsigned b = a; b < 4; ++b)
      for (unsigned c = 0; c < 4; ++c)
        for (unsigned d = c; d < 4; ++d) {
          Poly m = z(a, b) * z(c, d) - z(a, c) * z(b, d);
          if (!m.is_zero()) minors.push_back(m);
        }
  Poly f2 = z(0, 0) * z(1, 1) - z(0, 1) * z(0, 1);  // the pure-inner minor
  UnitMap phi2{{"u1", "e1"}, {"u2", "e2"}};
  Covector r02{{"z_u1_u1", QQ->one()}, {"z_u1_u2", QQ->from_integer(2)}};
  auto wit2 = embed_witness(f2, r02, phi2, M2, minors);
  CHECK(wit2.report.pass());
  CHECK(!wit2.w.is_zero());
  CHECK(ideal_member(wit2.w, buchberger(minors)));
}
