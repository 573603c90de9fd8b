#include <benchmark/benchmark.h>

#include "zeroprop/oracle.hpp"
#include "zeroprop/optimizer.hpp"
#include "zeroprop/proportions.hpp"

using namespace zeroprop;

namespace {

SectionFourParams section4() {
  SectionFourParams p;
  p.p1_shape = {{parse_decimal("-0.158"), parse_decimal("0.25")}};
  p.p2_shape = {{parse_decimal("0.492"), parse_decimal("0.075")}};
  p.r = 1.154;
  p.R = 0.617;
  return p;
}

SectionFiveParams section5() {
  SectionFiveParams p;
  p.p_shape = {{parse_decimal("-0.482"), parse_decimal("-0.392"), parse_decimal("-0.262")}};
  p.q_shape = {parse_decimal("-0.673"), {parse_decimal("0.369"), parse_decimal("-4.635")}};
  p.R = 0.746;
  p.delta = 0.771;
  return p;
}

void BM_Moments(benchmark::State& state) {
  const Poly p = expand_mollifier(section5().p_shape);
  for (auto _ : state) benchmark::DoNotOptimize(moments(p, p));
}
BENCHMARK(BM_Moments);

void BM_KernelJet(benchmark::State& state) {
  const Poly p = expand_mollifier(section5().p_shape);
  const KernelSpec spec{moments(p, p), 1.0, 0.746, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(kernel_jet(spec));
}
BENCHMARK(BM_KernelJet)->Arg(2)->Arg(6)->Arg(12);

void BM_KernelJetByDivision(benchmark::State& state) {
  const Poly p = expand_mollifier(section5().p_shape);
  const auto mt = moments(p, p);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_jet_by_division(mt, 1.0, {-0.746, -0.746}, order));
}
BENCHMARK(BM_KernelJetByDivision)->Arg(2)->Arg(6)->Arg(12);

void BM_CValue(benchmark::State& state) {
  const auto p = section4();
  for (auto _ : state) benchmark::DoNotOptimize(c_value(p));
}
BENCHMARK(BM_CValue);

void BM_C1Value(benchmark::State& state) {
  const auto p = section5();
  for (auto _ : state) benchmark::DoNotOptimize(c1_value(p));
}
BENCHMARK(BM_C1Value);

void BM_C1ByContour(benchmark::State& state) {
  const auto p = section5();
  for (auto _ : state) benchmark::DoNotOptimize(oracle::c1_by_contour(p));
}
BENCHMARK(BM_C1ByContour);

void BM_OptimizeKappa(benchmark::State& state) {
  SearchSpec s;
  s.target = Target::maximize_kappa;
  s.section4 = section4();
  s.section5 = section5();
  s.bounds = {{"R", {0.5, 1.0}}, {"delta", {0.5, 1.0}}};
  s.budget = 2000;
  s.restarts = 4;
  s.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(optimize(s));
}
BENCHMARK(BM_OptimizeKappa)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
