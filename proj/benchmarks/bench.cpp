#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "l1adapt/experiment.hpp"
#include "l1adapt/lp.hpp"
#include "l1adapt/plant.hpp"
#include "l1adapt/polyhedron.hpp"
#include "l1adapt/polynomial.hpp"
#include "l1adapt/rng.hpp"

using namespace l1adapt;

namespace {

Polyhedron random_polytope(int dim, int extra, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Polyhedron poly(dim);
  for (int i = 0; i < dim; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e(i) = 1.0;
    poly.add_halfspace(e, -5.0);
    poly.add_halfspace(-e, -5.0);
  }
  for (int k = 0; k < extra; ++k) {
    Eigen::VectorXd a(dim);
    for (int i = 0; i < dim; ++i) a(i) = rng.next_symmetric();
    poly.add_halfspace(a, -1.0 - rng.next_unit());
  }
  return poly;
}

}  // namespace

static void BM_impulse_norm(benchmark::State& state) {
  const std::vector<double> xi = {-4.2222, 6.9290, -5.2469, 1.5432,
                                  2.0000,  -3.3333, 1.3889};
  for (auto _ : state)
    benchmark::DoNotOptimize(xi_impulse_norm(xi, 4, 3).l1_norm);
}
BENCHMARK(BM_impulse_norm);

static void BM_lp_minimize(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Polyhedron poly = random_polytope(dim, 4 * dim, 1);
  Eigen::VectorXd obj = Eigen::VectorXd::Ones(dim);
  for (auto _ : state) benchmark::DoNotOptimize(lp_minimize(obj, poly).value);
}
BENCHMARK(BM_lp_minimize)->Arg(4)->Arg(9)->Arg(20);

static void BM_lfp_minimize(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Polyhedron poly = random_polytope(dim, 4 * dim, 2);
  Eigen::VectorXd e = Eigen::VectorXd::Ones(dim);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
  g(dim - 1) = -0.1;
  for (auto _ : state)
    benchmark::DoNotOptimize(lfp_minimize(e, 0.0, g, 1.0, poly, 0.5).value);
}
BENCHMARK(BM_lfp_minimize)->Arg(4)->Arg(9);

static void BM_plant_step(benchmark::State& state) {
  PlantParams p;
  p.n = 4;
  p.m = 3;
  p.xi = {-0.5, 0.3, -0.1, 0.05, 1.0, -0.4, 0.2};
  p.delta_w = 1.0;
  p.mu = 20;
  PlantState ps(p.n, {0.1, 0.2, 0.3, 0.4});
  double u = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step(ps, p, u, 0.0));
    u = -u;
  }
}
BENCHMARK(BM_plant_step);

static void BM_short_closed_loop(benchmark::State& state) {
  ExperimentConfig cfg = s7_config(ControllerKindId::adaptive_optimal,
                                   DisturbanceKind::random_uniform, 70, 100);
  for (auto _ : state)
    benchmark::DoNotOptimize(run(cfg).summary.update_count);
}
BENCHMARK(BM_short_closed_loop)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
