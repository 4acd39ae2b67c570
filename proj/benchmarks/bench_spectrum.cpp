#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "atspec/closed_form.hpp"
#include "atspec/dressed.hpp"
#include "atspec/linkage.hpp"
#include "atspec/model.hpp"
#include "atspec/oracle.hpp"

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

void BM_ClosedGrid(benchmark::State& state) {
  const atspec::QuartupletParams p{0.5, 0.5, 0.5, 0.5, kTau, 1.0, 1.0};
  constexpr int kPoints = 8001;
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      const double d = -4.0 + 8.0 * static_cast<double>(i) / (kPoints - 1);
      acc += atspec::spectrum_quartuplet(p, d);
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * kPoints);
}
BENCHMARK(BM_ClosedGrid);

void BM_LinearSolveGrid(benchmark::State& state) {
  const atspec::CoupledSystem sys = atspec::compile(
      atspec::preset("quintuplet", {0.5, 0.5, 0.5, 0.5, 0.5}, kTau / 3.0));
  constexpr int kPoints = 801;
  for (auto _ : state) {
    double acc = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      const double d = -5.0 + 10.0 * static_cast<double>(i) / (kPoints - 1);
      acc += atspec::spectrum_linear_solve(sys, d);
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * kPoints);
}
BENCHMARK(BM_LinearSolveGrid);

void BM_FindRoots(benchmark::State& state) {
  const atspec::QuintupletParams p{1.3, 0.4, 2.1, 0.7, 1.6, 2.2, 1.0, 1.0};
  const atspec::CharPoly poly = atspec::char_poly(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(atspec::find_roots(poly));
  }
}
BENCHMARK(BM_FindRoots);

void BM_RK4(benchmark::State& state) {
  const atspec::CoupledSystem sys = atspec::compile(
      atspec::preset("quartuplet", {0.5, 0.5, 0.5, 0.5}, kTau));
  for (auto _ : state) {
    benchmark::DoNotOptimize(atspec::integrate(sys, 5.0, 1e-3));
  }
}
BENCHMARK(BM_RK4);

}  // namespace

BENCHMARK_MAIN();
