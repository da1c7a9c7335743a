#include <benchmark/benchmark.h>

#include <random>

#include "formkit/groebner.hpp"
#include "formkit/strength.hpp"
#include "formkit/torsor.hpp"

using namespace formkit;

namespace {

Poly random_cubic(const PolyRingPtr& R, std::mt19937& rng) {
  const auto& K = R->field;
  Poly f(R);
  std::size_t n = R->vars.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = b; c < n; ++c)
        if (rng() & 1) {
          Poly::Exponents m(n, 0);
          ++m[a], ++m[b], ++m[c];
          f.add_term(m, K->one());
        }
  return f;
}

void BM_GroebnerCyclic4(benchmark::State& state) {
  auto K = parse_field_spec("GF(7)");
  auto R = make_ring(K, {"x1", "x2", "x3", "x4"});
  std::vector<Poly> gens = {
      parse_poly("x1+x2+x3+x4", R),
      parse_poly("x1*x2+x2*x3+x3*x4+x4*x1", R),
      parse_poly("x1*x2*x3+x2*x3*x4+x3*x4*x1+x4*x1*x2", R),
      parse_poly("x1*x2*x3*x4-1", R),
  };
  for (auto _ : state) {
    auto gb = buchberger(gens, MonomialOrder{});
    benchmark::DoNotOptimize(gb);
  }
}
BENCHMARK(BM_GroebnerCyclic4)->Unit(benchmark::kMillisecond);

void BM_GroebnerElimination(benchmark::State& state) {
  auto K = parse_field_spec("QQ");
  auto R = make_ring(K, {"t", "x", "y", "z"});
  std::vector<Poly> gens = {
      parse_poly("t^2-x", R),
      parse_poly("t^3-y", R),
      parse_poly("t^4-z", R),
  };
  for (auto _ : state) {
    auto gb = buchberger(gens, MonomialOrder{1});
    auto el = eliminate(gb, {"x", "y", "z"});
    benchmark::DoNotOptimize(el);
  }
}
BENCHMARK(BM_GroebnerElimination)->Unit(benchmark::kMillisecond);

void BM_StrengthExactCubic(benchmark::State& state) {
  auto K = parse_field_spec("GF(2)");
  auto R = make_ring(K, {"x1", "x2", "x3", "x4", "x5"});
  std::mt19937 rng(12);
  std::vector<Form> forms;
  while (forms.size() < 16) {
    Poly f = random_cubic(R, rng);
    if (!f.is_zero()) forms.emplace_back(f);
  }
  for (auto _ : state) {
    for (const auto& f : forms) {
      auto c = str_exact_finite_field(f);
      benchmark::DoNotOptimize(c);
    }
  }
}
BENCHMARK(BM_StrengthExactCubic)->Unit(benchmark::kMillisecond);

void BM_AbsoluteStrengthQuadric(benchmark::State& state) {
  auto K = parse_field_spec("GF(3)");
  auto R = make_ring(K, {"x1", "x2", "x3", "x4"});
  Form f(parse_poly("x1^2+x2^2+x3^2+x4^2", R));
  for (auto _ : state) {
    auto a = astr(f, false);  // exercise the generic route, not the rank shortcut
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_AbsoluteStrengthQuadric)->Unit(benchmark::kMillisecond);

void BM_DeltaExpansion(benchmark::State& state) {
  auto K = parse_field_spec("GF(5)");
  auto T = make_torsor(K, {"u1", "u2"}, {"x1", "x2", "x3"});
  std::mt19937 rng(34);
  Poly f = random_cubic(T.ring(), rng);
  for (auto _ : state) {
    auto dx = delta(f, T);
    benchmark::DoNotOptimize(dx);
  }
}
BENCHMARK(BM_DeltaExpansion)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
