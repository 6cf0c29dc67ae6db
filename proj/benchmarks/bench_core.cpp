#include <benchmark/benchmark.h>

#include <random>

#include <icp/existence.hpp>
#include <icp/fixtures.hpp>
#include <icp/flow.hpp>

using namespace icp;

namespace {

PatternState random_state(const Triangulation& t, Geometry g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> R(0.5, 2.0);
  Vector r(t.num_primal_vertices());
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = R(rng);
  return PatternState::from_radii(g, r);
}

void BM_Curvature(benchmark::State& state) {
  const Triangulation t = triangulate(fixtures::random_stacked_sphere(static_cast<int>(state.range(0)), 1));
  const PatternState s = random_state(t, Geometry::Hyperbolic, 2);
  for (auto _ : state) benchmark::DoNotOptimize(curvature(t, s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Curvature)->RangeMultiplier(4)->Range(8, 512)->Complexity();

void BM_Jacobian(benchmark::State& state) {
  const Triangulation t = triangulate(fixtures::random_stacked_sphere(static_cast<int>(state.range(0)), 1));
  const PatternState s = random_state(t, Geometry::Hyperbolic, 3);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(t, s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Jacobian)->RangeMultiplier(4)->Range(8, 512);

void BM_OctagonFlow(benchmark::State& state) {
  const Triangulation t = triangulate(fixtures::genus2_octagon());
  FlowConfig cfg;
  cfg.kind = state.range(0) ? FlowKind::CalabiHyperbolic : FlowKind::RicciHyperbolic;
  const PatternState s0 = PatternState::constant(Geometry::Hyperbolic, 1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg, t, s0));
  state.SetLabel(state.range(0) ? "calabi" : "ricci");
}
BENCHMARK(BM_OctagonFlow)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_CubeFlow(benchmark::State& state) {
  const Triangulation t = triangulate(fixtures::cube());
  FlowConfig cfg;
  cfg.kind = FlowKind::CalabiEuclidean;
  const PatternState s0 = random_state(t, Geometry::Euclidean, 4);
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg, t, s0));
}
BENCHMARK(BM_CubeFlow)->Unit(benchmark::kMicrosecond);

void BM_H3Exhaustive(benchmark::State& state) {
  const CellComplex c = fixtures::random_stacked_sphere(static_cast<int>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(check_h3(c));
}
BENCHMARK(BM_H3Exhaustive)->DenseRange(12, 20, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
