#include <benchmark/benchmark.h>

#include "bslab/bs_algebra.hpp"
#include "bslab/fixtures.hpp"
#include "bslab/obstruction.hpp"
#include "bslab/rotation.hpp"
#include "bslab/semiconjugacy.hpp"

using namespace bslab;

static void BM_ReduceWord(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += "abAB"[i * 7 % 4];
  Word w = Word::parse(text, 3);
  for (auto _ : state) benchmark::DoNotOptimize(reduce_word(w));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ReduceWord)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

static void BM_PlCompose(benchmark::State& state) {
  CircleMap p = CircleMap::pl({0, Rational(1, 4), Rational(3, 4)}, {2, Rational(1, 2), 1}, Rational(1, 10));
  CircleMap q = CircleMap::pl({0, Rational(1, 3)}, {Rational(3, 2), Rational(3, 4)}, Rational(2, 7));
  for (auto _ : state) benchmark::DoNotOptimize(compose(p, q));
}
BENCHMARK(BM_PlCompose);

static void BM_RotationEnclosure(benchmark::State& state) {
  CircleMap P = CircleMap::pl({0, Rational(1, 4), Rational(3, 4)}, {2, Rational(1, 2), 1}, Rational(1, 10));
  CircleMap f = compose(P, compose(CircleMap::rotation(Rational(13, 97)), P.inverse()));
  for (auto _ : state) benchmark::DoNotOptimize(rotation_enclosure(f, state.range(0)));
}
BENCHMARK(BM_RotationEnclosure)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_PsiFamily(benchmark::State& state) {
  AffineModel m = standard_model(2);
  Arc I{CirclePoint::projective(0), CirclePoint::projective(1)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(psi_interval_family(m.f0, m.h0, I, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * (2LL << state.range(0)));
}
BENCHMARK(BM_PsiFamily)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

static void BM_Semiconjugacy(benchmark::State& state) {
  ConjugatedAction a = pl_conjugated(2, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_semiconjugacy(a.f, a.h, 2, a.base, static_cast<int>(state.range(0)), a.fixed_point));
  }
}
BENCHMARK(BM_Semiconjugacy)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
