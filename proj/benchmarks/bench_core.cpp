#include <benchmark/benchmark.h>

#include <varcert/varcert.hpp>

using namespace varcert;

namespace {

const NormModel kE1 = NormModel::euclidean(1);
const Vec kZero{0.0};

void BM_DualityMap(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const NormModel m(3.0, n);
  Rng rng(1);
  Vec x(n);
  for (auto& c : x) c = rng.uniform(-1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(m.duality_map(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_DualityMap)->Arg(1)->Arg(16)->Arg(512);

void BM_MoreauEnvelope(benchmark::State& state) {
  const FunctionModel phi = models::staircase();
  const SamplePlan plan(1, static_cast<std::size_t>(state.range(0)), 0, Box::cube(1, -4.0, 4.0));
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(moreau_envelope(phi, 0.5, Vec{x}, plan, kE1));
    x = x > 0.9 ? 0.1 : x + 0.013;
  }
}
BENCHMARK(BM_MoreauEnvelope)->Arg(101)->Arg(401)->Arg(1601);

void BM_EnvelopeGradient(benchmark::State& state) {
  const FunctionModel phi = models::huber(0.5, 1);
  const SamplePlan plan(1, 401, 0, Box::cube(1, -3.0, 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(envelope_gradient(phi, 0.5, Vec{0.1}, Vec{0.37}, kE1, plan));
}
BENCHMARK(BM_EnvelopeGradient);

void BM_GraphSamples(benchmark::State& state) {
  const FunctionModel phi = models::staircase();
  const SamplePlan plan(1, static_cast<std::size_t>(state.range(0)), 0, Box::cube(1, -1.0, 1.0));
  const Window w(kZero, kZero, 0.3, 0.3, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(graph_samples(phi, w, plan, kE1));
}
BENCHMARK(BM_GraphSamples)->Arg(101)->Arg(1001);

void BM_VariationalConvexity(benchmark::State& state) {
  const FunctionModel phi = models::huber(0.5, 1);
  const SamplePlan plan(1, static_cast<std::size_t>(state.range(0)), 0, Box::cube(1, -1.0, 1.0));
  const Window w(kZero, kZero, 0.7, 0.7, std::numeric_limits<double>::infinity());
  for (auto _ : state) benchmark::DoNotOptimize(certify_variational_convexity(phi, kZero, kZero, 0.5, w, kE1, plan));
}
BENCHMARK(BM_VariationalConvexity)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);

void BM_MonotoneGap(benchmark::State& state) {
  const FunctionModel phi = models::abs_value(1);
  const SamplePlan plan(1, static_cast<std::size_t>(state.range(0)), 0, Box::cube(1, -1.0, 1.0));
  const auto samples = graph_samples(phi, Window(kZero, kZero, 1.0, 2.0, 1.5), plan, kE1);
  for (auto _ : state) benchmark::DoNotOptimize(strong_gap_duality(samples, 0.0, kE1, 1));
  state.counters["samples"] = static_cast<double>(samples.size());
}
BENCHMARK(BM_MonotoneGap)->Arg(101)->Arg(1001)->Unit(benchmark::kMillisecond);

void BM_PolyakL1(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Box box = Box::cube(m, -1.0, 1.0);
  const FunctionModel phi = models::l1_weighted_square(m);
  const NormFn norm = l1_grid_norm(m);
  for (auto _ : state)
    benchmark::DoNotOptimize(polyak_strong_convexity_check(phi, 2.0, box, SamplePlan(8, 1, 1000, box), norm));
}
BENCHMARK(BM_PolyakL1)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_TiltStability(benchmark::State& state) {
  const Box u = Box::around(kZero, 0.5);
  const SamplePlan plan(1, 201, 0, u);
  const FunctionModel phi = models::staircase();
  for (auto _ : state) benchmark::DoNotOptimize(tilt_stability_certify(phi, kZero, u, 0.2, plan, kE1));
}
BENCHMARK(BM_TiltStability)->Unit(benchmark::kMillisecond);

void BM_PsdCertify(benchmark::State& state) {
  const FunctionModel phi = models::staircase();
  const SamplePlan plan(1, 101, 0, Box::cube(1, -1.0, 1.0));
  const Window w(kZero, kZero, 0.5, 2.0, std::numeric_limits<double>::infinity());
  for (auto _ : state) benchmark::DoNotOptimize(psd_certify(phi, w, 0.5, plan, kE1));
}
BENCHMARK(BM_PsdCertify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
