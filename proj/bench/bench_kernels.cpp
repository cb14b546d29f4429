// Serial reference implementations against their OpenMP counterparts. Both
// variants of each pair produce bit-identical results, so the comparison is
// purely one of wall time.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "actsig/kernel.hpp"
#include "actsig/montecarlo.hpp"
#include "actsig/propagation.hpp"
#include "actsig/signature.hpp"

namespace {

using namespace actsig;

const QuadratureRule& rule() {
  static const QuadratureRule r = build_rule(kDefaultOrder);
  return r;
}

std::vector<Activation> classified() {
  std::vector<Activation> acts;
  for (const std::string& n : classified_names()) acts.push_back(builtin(n));
  return acts;
}

const std::vector<double> kSigmas{0.25, 0.5, 1.0, 1.5, 2.0, 3.0};

template <auto Fn>
void BM_ComponentTable(benchmark::State& state) {
  const auto acts = classified();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(acts, kSigmas, rule()));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(acts.size() * kSigmas.size()));
}
BENCHMARK(BM_ComponentTable<component_table_serial>)->Name("component_table/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComponentTable<component_table>)->Name("component_table/parallel")->Unit(benchmark::kMillisecond);

template <auto Fn>
void BM_SignatureBatch(benchmark::State& state) {
  const std::vector<Activation> acts{builtin("relu"), builtin("gelu"), builtin("swish")};
  const std::vector<double> sigmas{0.5, 1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(acts, sigmas, rule()));
}
BENCHMARK(BM_SignatureBatch<signature_batch_serial>)->Name("signature_batch/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SignatureBatch<signature_batch>)->Name("signature_batch/parallel")->Unit(benchmark::kMillisecond);

template <auto Fn>
void BM_CriticalityScan(benchmark::State& state) {
  const Activation act = builtin("tanh");
  const GridAxis w{0.5, 2.5, static_cast<int>(state.range(0))};
  const GridAxis b{0.0, 0.5, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(act, w, b, rule(), FixedPointOptions{}));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_CriticalityScan<criticality_scan_serial>)->Name("criticality_scan/serial")->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CriticalityScan<criticality_scan>)->Name("criticality_scan/parallel")->Arg(16)->Unit(benchmark::kMillisecond);

template <auto Fn>
void BM_MonteCarlo(benchmark::State& state) {
  const Activation act = builtin("gelu");
  const auto samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(act, 1.0, samples, 42));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo<mc_components_serial>)->Name("mc_components/serial")->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo<mc_components>)->Name("mc_components/parallel")->Arg(1 << 18)->Unit(benchmark::kMillisecond);

template <auto Fn>
void BM_BoundStress(benchmark::State& state) {
  const Activation act = builtin("tanh");
  for (auto _ : state) benchmark::DoNotOptimize(Fn(act, static_cast<int>(state.range(0)), 8, 20000, 42, rule()));
}
BENCHMARK(BM_BoundStress<bound_stress_serial>)->Name("bound_stress/serial")->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundStress<bound_stress>)->Name("bound_stress/parallel")->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
