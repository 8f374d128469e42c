#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "sobtri/analysis.hpp"
#include "sobtri/fem.hpp"

using namespace sobtri;

namespace {

InvariantPair fixture() {
  const auto d = make_domain(1.0);
  return u_slice(d, BoundaryProfile::bump(0.5, 0.6, 1.0), spectral_point(0.2, d));
}

std::vector<Point> points(const TriangleDomain& d, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(1e-3, 1.0);
  std::vector<Point> p;
  while (static_cast<int>(p.size()) < n) {
    const double x = d.leg() * U(rng), y = U(rng) * d.alpha() * x;
    p.push_back({x, y});
  }
  return p;
}

WavePacket packet(double t_max) {
  const auto d = make_domain(1.0);
  QuadraturePlan plan;
  plan.t_max = t_max;
  plan.depth = 1e-7;
  return WavePacket(d,
                    {{SpectralWindow(0.05, 0.45, SpectralWindow::Shape::Smooth), BoundaryProfile::bump(0.5, 0.6, 1.0),
                      BoundaryProfile::zero()}},
                    {}, plan);
}

}  // namespace

static void BM_SliceEval(benchmark::State& st) {
  const auto s = fixture();
  const auto pts = points(s.domain(), 1024, 1);
  for (auto _ : st)
    for (const auto& p : pts) benchmark::DoNotOptimize(s.evaluate(p.x, p.y));
  st.SetItemsProcessed(st.iterations() * pts.size());
}
BENCHMARK(BM_SliceEval);

// Points 10^-k from the accumulation corner.
static void BM_SliceEvalDeep(benchmark::State& st) {
  const auto s = fixture();
  const double x = std::pow(10.0, -static_cast<double>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(s.value(x, 0.5 * x));
}
BENCHMARK(BM_SliceEvalDeep)->DenseRange(2, 12, 5);

static void BM_RiemannEval(benchmark::State& st) {
  const auto d = make_domain(1.0);
  const auto s = u_slice(d, BoundaryProfile::constant(1.0), spectral_point(0.2, d));
  for (auto _ : st) benchmark::DoNotOptimize(riemann_eval(s, 0.3, 0.2));
}
BENCHMARK(BM_RiemannEval);

static void BM_PacketBuild(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(packet(static_cast<double>(st.range(0))).nodes());
}
BENCHMARK(BM_PacketBuild)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_PacketEvolve(benchmark::State& st) {
  const auto p = packet(100.0);
  const auto pts = points(p.domain(), 256, 2);
  for (auto _ : st) benchmark::DoNotOptimize(p.evolve(50.0, pts));
  st.SetItemsProcessed(st.iterations() * pts.size());
}
BENCHMARK(BM_PacketEvolve)->Unit(benchmark::kMillisecond);

static void BM_Energy(benchmark::State& st) {
  const auto p = packet(10.0);
  for (auto _ : st) benchmark::DoNotOptimize(energy(p, 10.0, 0.05));
}
BENCHMARK(BM_Energy)->Unit(benchmark::kMillisecond);

static void BM_AssembleAndSolve(benchmark::State& st) {
  const auto d = make_domain(1.0);
  const double h = 1.0 / st.range(0);
  for (auto _ : st) {
    const DiscreteOperator op(domain_mesh(d, h));
    const Vector f = Vector::Ones(static_cast<Eigen::Index>(op.dofs()));
    benchmark::DoNotOptimize(op.apply_A(f));
  }
}
BENCHMARK(BM_AssembleAndSolve)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

static void BM_HyperbolicResidual(benchmark::State& st) {
  const auto d = make_domain(1.0);
  const auto s = u_slice(d, BoundaryProfile::constant(1.0), spectral_point(0.2, d));
  const auto tests = make_bump_tests(d, TestFamilyOptions{});
  for (auto _ : st) benchmark::DoNotOptimize(weak_residual_hyperbolic(s, 0.2, tests, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_HyperbolicResidual)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
