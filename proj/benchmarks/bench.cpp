#include <benchmark/benchmark.h>

#include <cmath>

#include <tribound/collatz.hpp>
#include <tribound/eliminate.hpp>
#include <tribound/solver.hpp>
#include <tribound/system.hpp>

namespace {

using namespace tribound;

void BM_OperatorSweep(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const NtOperator op = NtOperator::make(k);
  std::vector<double> c(op.n, 1.0), out(op.n);
  const double lam = 1.7;
  for (auto _ : state) {
    op.apply(c, out, std::pow(lam, -2.0), std::pow(lam, -0.415), std::pow(lam, 0.585));
    benchmark::DoNotOptimize(out.data());
    c.swap(out);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(op.n));
}
BENCHMARK(BM_OperatorSweep)->DenseRange(6, 11, 1);

void BM_Eliminate(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    System sys = eliminate_system(k);
    benchmark::DoNotOptimize(sys.trees.data());
  }
}
BENCHMARK(BM_Eliminate)->DenseRange(2, 4, 1)->Unit(benchmark::kMillisecond);

void BM_BoundedCount(benchmark::State& state) {
  const u64 x = static_cast<u64>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pi_a_star(2, x));
  }
}
BENCHMARK(BM_BoundedCount)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_PowerClassify(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const NtOperator op = NtOperator::make(k);
  for (auto _ : state) {
    PowerResult r = power_iterate(op, 1.60, PowerOptions{50000, 64, 1});
    benchmark::DoNotOptimize(r.kind);
  }
}
BENCHMARK(BM_PowerClassify)->DenseRange(4, 6, 1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
