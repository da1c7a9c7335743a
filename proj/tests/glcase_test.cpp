#include <algorithm>

#include "doctest.h"
#include "formkit/glcase.hpp"

using namespace formkit;

TEST_CASE("level space bases and dimensions") {
  auto s2 = LevelSpace::sym(2);
  CHECK(s2.dimension(2) == 3);
  CHECK(s2.basis(2) == std::vector<std::string>{"e1^2", "e1e2", "e2^2"});

  auto tw = LevelSpace::twist(LevelSpace::sym(1), 2);
  CHECK(tw.dimension(3) == 3);
  CHECK(tw.basis(3) == std::vector<std::string>{"e1^(2)", "e2^(2)", "e3^(2)"});

  auto sum = LevelSpace::sum({LevelSpace::sym(1), LevelSpace::sym(2)});
  CHECK(sum.dimension(1) == 2);
  CHECK(sum.basis(1) == std::vector<std::string>{"e1", "e1^2"});

  CHECK(LevelSpace::sym(0).dimension(4) == 1);
  CHECK(LevelSpace::sym(3).dimension(0) == 0);
  for (std::size_t n = 0; n <= 4; ++n)
    CHECK(s2.basis(n).size() == s2.dimension(n));
}

TEST_CASE("twist multiplies the degree") {
  CHECK(LevelSpace::sym(3).degree() == 3);
  CHECK(LevelSpace::twist(LevelSpace::sym(3), 2).degree() == 6);
  CHECK(LevelSpace::twist(LevelSpace::twist(LevelSpace::sym(1), 2), 2).degree() == 4);
  CHECK(LevelSpace::sum({LevelSpace::sym(1), LevelSpace::sym(2)}).degree() == 2);
  CHECK(LevelSpace::twist(LevelSpace::sum({LevelSpace::sym(2)}), 3).degree() == 6);
  CHECK_THROWS_AS(LevelSpace::twist(LevelSpace::sym(1), 0), GLCaseError);
}

TEST_CASE("shift decomposition dimensions") {
  auto p = shift_decompose(2, 1, 2);
  REQUIRE(p.size() == 3);
  CHECK(p[0].i == 0);
  CHECK(p[0].dim == 3);  // the pure second-block piece: Sym^2 at level 2
  CHECK(p[1].dim == 2);
  CHECK(p[2].dim == 1);

  auto q = shift_decompose(1, 1, 5);
  REQUIRE(q.size() == 2);
  CHECK(q[0].dim == 5);
  CHECK(q[1].dim == 1);

  unsigned long total3 = 0;
  for (const auto& piece : shift_decompose(3, 2, 2)) total3 += piece.dim;
  CHECK(total3 == 20);  // dim Sym^3(K^4)

  for (unsigned a = 0; a <= 5; ++a)
    for (std::size_t m = 0; m <= 4; ++m)
      for (std::size_t n = 0; n <= 4; ++n) {
        unsigned long total = 0;
        for (const auto& piece : shift_decompose(a, m, n)) total += piece.dim;
        CHECK(total == LevelSpace::sym(a).dimension(m + n));
      }
}

TEST_CASE("squaring-relation ideal from formal expansion") {
  auto I0 = ns_example_ideal(0);
  CHECK(I0.gens.empty());

  auto I1 = ns_example_ideal(1);
  REQUIRE(I1.gens.size() == 1);
  CHECK(I1.z_vars == std::vector<std::string>{"z1"});
  CHECK(I1.w_vars == std::vector<std::string>{"w_1111"});
  CHECK(I1.gens[0] == parse_poly("z1^2 + w_1111", I1.ring));

  auto I2 = ns_example_ideal(2);
  REQUIRE(I2.gens.size() == 2);  // all cross multinomial coefficients vanish mod 2
  CHECK(I2.w_vars == std::vector<std::string>{"w_1111", "w_1112", "w_1122", "w_1222", "w_2222"});
  auto has = [&](const std::string& t) {
    Poly p = parse_poly(t, I2.ring);
    return std::find(I2.gens.begin(), I2.gens.end(), p) != I2.gens.end();
  };
  CHECK(has("z1^2 + w_1111"));
  CHECK(has("z2^2 + w_2222"));

  auto I3 = ns_example_ideal(3);
  CHECK(I3.gens.size() == 3);
}

TEST_CASE("generator span is stable under the finite-level action") {
  auto I = ns_example_ideal(3);
  auto K = I.ring->field;
  std::vector<FieldElem> zero{K->zero(), K->zero(), K->zero()};

  // basis vectors reproduce the generators themselves
  for (std::size_t i = 0; i < 3; ++i) {
    auto v = zero;
    v[i] = K->one();
    Poly g = ns_example_generator(I, v);
    CHECK(std::find(I.gens.begin(), I.gens.end(), g) != I.gens.end());
  }

  // every vector (images of basis vectors under permutations and transvections)
  // lands in the span of the generators
  for (unsigned mask = 0; mask < 8; ++mask) {
    auto v = zero;
    for (std::size_t i = 0; i < 3; ++i)
      if (mask & (1u << i)) v[i] = K->one();
    Poly g = ns_example_generator(I, v);
    bool in_span = false;
    for (unsigned sub = 0; sub < 8 && !in_span; ++sub) {
      Poly acc(I.ring);
      for (std::size_t i = 0; i < 3; ++i)
        if (sub & (1u << i)) acc = acc + I.gens[i];
      in_span = acc == g;
    }
    CHECK(in_span);
  }

  std::vector<FieldElem> wrong{K->one()};
  CHECK_THROWS_AS(ns_example_generator(I, wrong), GLCaseError);
}

TEST_CASE("coordinate-ring checks for the squaring relations") {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto rep = ns_example_check(n);
    CHECK(rep.injective);
    CHECK(rep.f_surjective);
    CHECK(rep.pass());
  }
}
