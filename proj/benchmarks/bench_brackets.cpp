#include <benchmark/benchmark.h>

#include <phasespace/dynamics.hpp>
#include <phasespace/states.hpp>

using namespace phasespace;

namespace {

PhaseField dense_field(const PhaseGrid& g, double shift) {
  return PhaseField::from_function(g, [shift](double q, double p) {
    return std::exp(-(q - shift) * (q - shift) / 2 - p * p / 3) * std::cos(2 * q + p);
  });
}

void BM_SineBracketFast(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhaseGrid g = make_grid(n, n, -4, 4, -4, 4);
  const PhaseField f = dense_field(g, 0.5), h = dense_field(g, -0.5);
  for (auto _ : state) benchmark::DoNotOptimize(sine_bracket(f, h, 1.0));
}
BENCHMARK(BM_SineBracketFast)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SineBracketBrute(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhaseGrid g = make_grid(n, n, -4, 4, -4, 4);
  const PhaseField f = dense_field(g, 0.5), h = dense_field(g, -0.5);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_sine_bracket(f, h, 1.0));
}
BENCHMARK(BM_SineBracketBrute)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_PoissonBracket(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhaseGrid g = make_grid(n, n, -8, 8, -8, 8);
  const PhaseField f = dense_field(g, 0.5), h = dense_field(g, -0.5);
  for (auto _ : state) benchmark::DoNotOptimize(poisson_bracket(f, h));
}
BENCHMARK(BM_PoissonBracket)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

// arg 0: quantum on a separable H, 1: classical, 2: quantum on the oscillator set n <= 10.
void BM_GeneratorApply(benchmark::State& state) {
  const PhaseGrid g = make_grid(128, 128, -8, 8, -8, 8);
  const PhaseField H = windowed_separable(g, [](double q) { return q * q * q * q / 4; }, [](double p) { return p * p / 2; });
  const PhaseField f = coherent_state(g, 1.0, 0.5);
  const Generator gen = state.range(0) == 2   ? Generator(harmonic_oscillator_set(g, 10), DynamicsKernel::quantum(1.0))
                        : state.range(0) == 1 ? Generator(H, DynamicsKernel::classical())
                                              : Generator(H, DynamicsKernel::quantum(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(gen.apply(f));
}
BENCHMARK(BM_GeneratorApply)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
