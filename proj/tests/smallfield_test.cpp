#include <random>

#include "doctest.h"
#include "formkit/smallfield.hpp"

using namespace formkit;

TEST_CASE("tables agree with exact tower arithmetic") {
  for (const char* spec : {"GF(2)", "GF(5)", "GF(2)[u]/(u^2+u+1)", "GF(2)[v]/(v^3+v+1)",
                           "GF(3)[u]/(u^2+1)"}) {
    auto K = parse_field_spec(spec);
    SmallField F(K);
    unsigned q = F.order();
    CHECK(F.element(0).is_zero());
    CHECK(F.element(1).is_one());
    for (unsigned a = 0; a < q; ++a) {
      CHECK(F.element(F.neg(static_cast<uint8_t>(a))) == -F.element(static_cast<uint8_t>(a)));
      if (a != 0) {
        CHECK(F.mul(static_cast<uint8_t>(a), F.inv(static_cast<uint8_t>(a))) == 1);
      }
      for (unsigned b = 0; b < q; ++b) {
        uint8_t ua = static_cast<uint8_t>(a), ub = static_cast<uint8_t>(b);
        CHECK(F.element(F.add(ua, ub)) == F.element(ua) + F.element(ub));
        CHECK(F.element(F.mul(ua, ub)) == F.element(ua) * F.element(ub));
        CHECK(F.element(F.sub(ua, ub)) == F.element(ua) - F.element(ub));
      }
    }
  }
}

TEST_CASE("index_of round trip") {
  auto K = parse_field_spec("GF(2)[u]/(u^2+u+1)");
  SmallField F(K);
  for (unsigned a = 0; a < F.order(); ++a)
    CHECK(F.index_of(F.element(static_cast<uint8_t>(a))) == a);
  CHECK_THROWS_AS(SmallField(parse_field_spec("GF(2)(t1)")), FieldError);
}

TEST_CASE("linear solver over tables") {
  std::mt19937 rng(99);
  for (const char* spec : {"GF(2)", "GF(3)", "GF(2)[v]/(v^3+v+1)"}) {
    SmallField F(parse_field_spec(spec));
    std::uniform_int_distribution<unsigned> pick(0, F.order() - 1);
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
      std::vector<uint8_t> A(rows * cols);
      for (auto& v : A) v = static_cast<uint8_t>(pick(rng));
      // consistent instance: b = A * x0
      std::vector<uint8_t> x0(cols);
      for (auto& v : x0) v = static_cast<uint8_t>(pick(rng));
      std::vector<uint8_t> b(rows, 0);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
          b[i] = F.add(b[i], F.mul(A[i * cols + j], x0[j]));
      auto sol = small_solve(F, A, rows, cols, b);
      REQUIRE(sol.has_value());
      for (std::size_t i = 0; i < rows; ++i) {
        uint8_t acc = 0;
        for (std::size_t j = 0; j < cols; ++j)
          acc = F.add(acc, F.mul(A[i * cols + j], (*sol)[j]));
        CHECK(acc == b[i]);
      }
    }
  }
  // an inconsistent system
  SmallField F2(parse_field_spec("GF(2)"));
  CHECK(!small_solve(F2, {1, 1, 1, 1}, 2, 2, {0, 1}).has_value());
}
