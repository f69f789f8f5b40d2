// Microbenchmarks for the hot paths: dense matrix exponential, Lyapunov
// metric solves, exact assignment, and integrator step throughput.

#include <benchmark/benchmark.h>

#include <random>

#include "ctkit/certify.hpp"
#include "ctkit/diagnose.hpp"
#include "ctkit/models.hpp"
#include "ctkit/simulate.hpp"

using namespace ctkit;

namespace {

Matrix random_stable(int n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = nd(gen);
  return a * a.transpose() / n + 0.5 * Matrix::Identity(n, n);
}

void bm_expm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Matrix a = random_stable(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(bm_expm)->Arg(4)->Arg(16)->Arg(64);

void bm_lyapunov_metric(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Matrix b = random_stable(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_metric(b));
}
BENCHMARK(bm_lyapunov_metric)->Arg(2)->Arg(8)->Arg(16);

void bm_empirical_w2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  EmpiricalMeasure mu, nu;
  for (int i = 0; i < n; ++i) {
    Vector a(2), b(2);
    a << nd(gen), nd(gen);
    b << nd(gen), nd(gen);
    mu.points.push_back(a);
    nu.points.push_back(b);
  }
  SpdMatrix eye = SpdMatrix::identity(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(empirical_wp(mu, nu, WassersteinOrder::W2, eye));
}
BENCHMARK(bm_empirical_w2)->Arg(32)->Arg(128)->Arg(512);

void bm_em_step(benchmark::State& state) {
  Potential u = cosine_modulated_potential(HessianBounds(1, 4), 4);
  DriftModel model = langevin_drift(u, 4.0);
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.thinning = 1000;
  Vector z0 = Vector::Zero(8);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_em(model, z0, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.steps());
}
BENCHMARK(bm_em_step);

void bm_splitting_step(benchmark::State& state) {
  Potential u = cosine_modulated_potential(HessianBounds(1, 4), 2);
  OrderKSystem sys = order_k_system(2, 2);
  DriftModel model = glangevin_drift(u, sys.b, 12.0, 4);
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.scheme = Scheme::Splitting;
  cfg.thinning = 1000;
  Vector z0 = Vector::Zero(6);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(model, z0, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.steps());
}
BENCHMARK(bm_splitting_step);

}  // namespace

BENCHMARK_MAIN();
