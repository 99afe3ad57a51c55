#include <benchmark/benchmark.h>

#include <random>

#include "primhom/algebra.hpp"
#include "primhom/cover.hpp"
#include "primhom/embedding.hpp"
#include "primhom/unit_group.hpp"

namespace primhom {
namespace {

/// Product of two random units of M-truncation (r=3, genus 2) at degree
/// bound 9 with `range(0)` random higher terms each.
void BM_MTruncMultiply(benchmark::State& state) {
  const AlgebraSpec spec = AlgebraSpec::m_trunc(3, 2, 2);
  std::mt19937_64 rng(1);
  const AlgElement a = random_unit(spec, rng, static_cast<int>(state.range(0))).value();
  const AlgElement b = random_unit(spec, rng, static_cast<int>(state.range(0))).value();
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.counters["terms"] = static_cast<double>((a * b).size());
}
BENCHMARK(BM_MTruncMultiply)->Arg(8)->Arg(64)->Arg(512)->Unit(benchmark::kMicrosecond);

/// Ninth power of a random M-truncation unit: the inner loop of the surface
/// witness check.
void BM_MTruncPower(benchmark::State& state) {
  const AlgebraSpec spec = AlgebraSpec::m_trunc(3, 2, 2);
  std::mt19937_64 rng(2);
  const AlgElement u = random_unit(spec, rng, 16).value();
  for (auto _ : state) benchmark::DoNotOptimize(power(u, 9));
}
BENCHMARK(BM_MTruncPower)->Unit(benchmark::kMillisecond);

/// Image of the genus-2 relator in the quaternion truncation (r=7, k=3).
void BM_QuaternionRelator(benchmark::State& state) {
  const AlgebraSpec h = AlgebraSpec::quat_trunc(7, 3);
  const GroupWord relator = GroupWord::surface_relator(2);
  for (auto _ : state) benchmark::DoNotOptimize(tau(relator, h));
}
BENCHMARK(BM_QuaternionRelator)->Unit(benchmark::kMillisecond);

/// Full surface witness check over all 80 classes at (r=3, g=2, k=2).
void BM_SurfaceWitnessClasses(benchmark::State& state) {
  const PrimeWitness w = assemble_witness_surface(3, 2, 2);
  for (auto _ : state) {
    std::vector<std::uint64_t> cls(4, 0);
    for (int idx = 1; idx < 81; ++idx) {
      for (auto& c : cls)
        if (++c < 3) break; else c = 0;
      benchmark::DoNotOptimize(check_word(w, class_representative(w.alphabet, cls)));
    }
  }
}
BENCHMARK(BM_SurfaceWitnessClasses)->Unit(benchmark::kMillisecond);

/// BFS enumeration of the 2187-element witness group and its cover.
void BM_WitnessCoverBuild(benchmark::State& state) {
  const FiniteQuotient q = FiniteQuotient::from_witness(assemble_witness_free(3, 2, 1, "sorted"));
  for (auto _ : state) benchmark::DoNotOptimize(build_cover(q));
}
BENCHMARK(BM_WitnessCoverBuild)->Unit(benchmark::kMillisecond);

/// Vanishing check for all 3-primitive words up to the given length.
void BM_IsotypicCheck(benchmark::State& state) {
  const PrimeWitness w = assemble_witness_free(3, 2, 1, "sorted");
  const CoverComplex c = build_cover(FiniteQuotient::from_witness(w));
  const CentralCharacter chi = central_character(c, w);
  for (auto _ : state)
    benchmark::DoNotOptimize(isotypic_projection_check(c, chi, d_primitive(3), static_cast<int>(state.range(0)), 0));
}
BENCHMARK(BM_IsotypicCheck)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace primhom

BENCHMARK_MAIN();
