// Serial reference against the OpenMP kernels on the three hot loops:
// window systoles, form value spectra and the Littlewood scan.

#include "slab/dynamics.hpp"
#include "slab/forms.hpp"

#include <benchmark/benchmark.h>

using namespace slab;

namespace {

Execution mode_of(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

SLattice survey_lattice() {
  auto k = create_field({BigInt(0), BigInt(1)});
  auto S = archimedean_places(k);
  for (auto& v : finite_places(k, 2)) S.push_back(v);
  auto x = identity_point(k, S, 2);
  return act(torus_from_exponents(S, default_exponents(2, 2), {Real("1.3"), Real(3)}), x).lattice;
}

void BM_Systole(benchmark::State& state) {
  const auto lat = survey_lattice();
  for (auto _ : state) benchmark::DoNotOptimize(systole(lat, {200, 8}, mode_of(state)).min_content);
}

void BM_Spectrum(benchmark::State& state) {
  auto Q = create_field({BigInt(0), BigInt(1)});
  auto F = create_field({BigInt(-2), BigInt(0), BigInt(1)});
  auto s = [&](int a, int b) {
    return LocalScalar{Complex(Real(a) + Real(b) * sqrt(Real(2))), FieldElement(F, {Rational(a), Rational(b)})};
  };
  auto f = make_form(Q, archimedean_places(Q), {{{s(1, 0), s(0, 0)}, {s(0, 1), s(-1, 0)}}});
  for (auto _ : state) benchmark::DoNotOptimize(value_spectrum(f, {1000, 0, 1e9}, Real(10), mode_of(state)).points);
}

void BM_Littlewood(benchmark::State& state) {
  const RealSpec a{sqrt(Real(2)), std::nullopt}, b{sqrt(Real(3)), std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(littlewood_scan(a, b, 20000000, mode_of(state)).argmin);
}

}  // namespace

// argument 0 = serial reference, 1 = OpenMP
BENCHMARK(BM_Systole)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Spectrum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Littlewood)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
