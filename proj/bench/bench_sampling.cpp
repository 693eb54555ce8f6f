#include <benchmark/benchmark.h>

#include "qcomp/expr.hpp"
#include "qcomp/sampling.hpp"

using namespace qcomp;

namespace {

struct Fixture {
  Box box{{"x", "y"}, {{-1.0, 1.0}, {-1.0, 1.0}}};
  CompiledExpr f{parse("t*(1/(t*(t + (x - 0.3)^2 + y^2)) - sin(5*x)*cos(3*y)/t)"),
                 {"t", "x", "y"}};
  std::vector<double> t = geometric_grid(1.0, 6, 10);
  std::vector<std::vector<double>> x;
  explicit Fixture(int samples) : x(latin_hypercube(box, samples, 20240611)) {}
};

void BM_SupProfileSerial(benchmark::State& st) {
  Fixture fx(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sup_profile_serial(fx.f, fx.t, fx.x, fx.box));
}

void BM_SupProfileParallel(benchmark::State& st) {
  Fixture fx(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(sup_profile(fx.f, fx.t, fx.x, fx.box));
}

void BM_EvaluateGridSerial(benchmark::State& st) {
  Fixture fx(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_grid_serial(fx.f, fx.t, fx.x));
  st.SetItemsProcessed(st.iterations() * fx.t.size() * fx.x.size());
}

void BM_EvaluateGridParallel(benchmark::State& st) {
  Fixture fx(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_grid(fx.f, fx.t, fx.x));
  st.SetItemsProcessed(st.iterations() * fx.t.size() * fx.x.size());
}

}  // namespace

BENCHMARK(BM_SupProfileSerial)->Arg(128)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SupProfileParallel)->Arg(128)->Arg(1024)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateGridSerial)->Arg(128)->Arg(4096)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_EvaluateGridParallel)->Arg(128)->Arg(4096)->Unit(benchmark::kMicrosecond)->UseRealTime();

BENCHMARK_MAIN();
