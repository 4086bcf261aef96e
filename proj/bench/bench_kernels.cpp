// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP kernels on the Monte-Carlo hot loops.
// Arg 0 of the *Parallel cases is the thread count.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "miso/kernels.hpp"

using namespace miso;

namespace {

SampleSource source(std::size_t n) {
  ChannelStatistics s;
  s.n = 2;
  s.q11 = s.q22 = CMatrix::Identity(2, 2);
  s.q12 = s.q21 = 0.5 * CMatrix::Identity(2, 2);
  s.noise = {0.5, 0.5};
  return SampleSource::from_statistics(s, 1, n);
}

const SampleSource& src() {
  static const SampleSource s = source(100000);
  return s;
}

const std::vector<SampleGeometry>& geometry() {
  static const auto g = kernels::geometry_serial(src());
  return g;
}

constexpr RatePoint kPoint{0.6, 0.6};

void Geometry(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::geometry_serial(src()));
}
void GeometryParallel(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::geometry_parallel(src(), static_cast<int>(st.range(0))));
}

void Classify(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::classify_serial(geometry(), kPoint, src().noise()));
}
void ClassifyParallel(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(
        kernels::classify_parallel(geometry(), kPoint, src().noise(), static_cast<int>(st.range(0))));
}

void Column(benchmark::State& st) {
  std::vector<double> out(geometry().size());
  for (auto _ : st) {
    kernels::column_serial(geometry(), 0.5, src().noise(), out);
    benchmark::ClobberMemory();
  }
}
void ColumnParallel(benchmark::State& st) {
  std::vector<double> out(geometry().size());
  for (auto _ : st) {
    kernels::column_parallel(geometry(), 0.5, src().noise(), out, static_cast<int>(st.range(0)));
    benchmark::ClobberMemory();
  }
}

void Policy(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::policy_serial(src(), kPoint, 0.5, 3));
}
void PolicyParallel(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(
        kernels::policy_parallel(src(), kPoint, 0.5, 3, static_cast<int>(st.range(0))));
}

void threads(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= omp_get_max_threads(); t *= 2) b->Arg(t);
}

}  // namespace

BENCHMARK(Geometry)->Unit(benchmark::kMillisecond);
BENCHMARK(GeometryParallel)->Apply(threads)->Unit(benchmark::kMillisecond);
BENCHMARK(Classify)->Unit(benchmark::kMillisecond);
BENCHMARK(ClassifyParallel)->Apply(threads)->Unit(benchmark::kMillisecond);
BENCHMARK(Column)->Unit(benchmark::kMillisecond);
BENCHMARK(ColumnParallel)->Apply(threads)->Unit(benchmark::kMillisecond);
BENCHMARK(Policy)->Unit(benchmark::kMillisecond);
BENCHMARK(PolicyParallel)->Apply(threads)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
