#include <cmath>

#include "ctkit/certify.hpp"
#include "ctkit/simulate.hpp"
#include "doctest.h"

using namespace ctkit;

TEST_CASE("NoiseStream draws are deterministic, distinct across addresses") {
  NoiseStream s(42, 0, 0);
  CHECK(s.uniform(3, 1) == NoiseStream(42, 0, 0).uniform(3, 1));
  CHECK(s.uniform(3, 1) != s.uniform(3, 2));
  CHECK(s.uniform(3, 1) != s.uniform(4, 1));
  CHECK(s.uniform(3, 1) != NoiseStream(43, 0, 0).uniform(3, 1));
  CHECK(s.uniform(3, 1) != NoiseStream(42, 1, 0).uniform(3, 1));
  CHECK(s.uniform(3, 1) != NoiseStream(42, 0, 1).uniform(3, 1));

  // uniforms live in (0, 1]; sample moments of the normal are sane
  double sum = 0, sq = 0;
  const int cnt = 40000;
  for (int i = 0; i < cnt; ++i) {
    const double u = s.uniform(0, std::uint32_t(i));
    CHECK(u > 0);
    CHECK(u <= 1);
    const double g = s.normal(1, std::uint32_t(i));
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / cnt) < 0.02);
  CHECK(sq / cnt == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("simulate_em is reproducible and noise-free EM matches the linear recursion") {
  Potential u = quadratic_potential(SpdMatrix::identity(1));
  DriftModel model = langevin_drift(u, 2.0);

  IntegratorConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  cfg.seed = 7;
  Vector z0(2);
  z0 << 1.0, 0.0;

  Trajectory t1 = simulate_em(model, z0, cfg);
  Trajectory t2 = simulate_em(model, z0, cfg);
  REQUIRE(t1.states.size() == t2.states.size());
  for (std::size_t i = 0; i < t1.states.size(); ++i)
    CHECK((t1.states[i] - t2.states[i]).norm() == 0.0);

  cfg.replica_index = 1;
  Trajectory t3 = simulate_em(model, z0, cfg);
  CHECK((t1.states.back() - t3.states.back()).norm() > 0);

  // zero diffusion: EM is the exact linear recursion z_{k+1} = (I + dt J) z_k
  DriftModel det = model;
  det.sigma = Matrix::Zero(2, 2);
  Trajectory td = simulate_em(det, z0, cfg);
  Matrix j(2, 2);
  j << 0, 1, -1, -2;
  Matrix step = Matrix::Identity(2, 2) + cfg.dt * j;
  Vector z = z0;
  for (long k = 0; k < cfg.steps(); ++k) z = step * z;
  CHECK((td.states.back() - z).norm() < 1e-12);
}

TEST_CASE("simulate_em throws Diverged on explosive drift") {
  DriftModel bad;
  bad.dim = 1;
  bad.drift = [](const Vector& z) { return Vector(2.0 * z); };
  bad.jacobian = [](const Vector&) { return 2.0 * Matrix::Identity(1, 1); };
  bad.sigma = Matrix::Zero(1, 1);
  IntegratorConfig cfg;
  cfg.dt = 0.5;
  cfg.t_end = 60.0;
  CHECK_THROWS_AS(simulate_em(bad, Vector::Constant(1, 1.0), cfg), Diverged);
}

TEST_CASE("thinning keeps the endpoints and every k-th step") {
  Potential u = quadratic_potential(SpdMatrix::identity(1));
  DriftModel model = langevin_drift(u, 2.0);
  IntegratorConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 1.0;
  cfg.thinning = 3;
  Trajectory t = simulate_em(model, Vector::Zero(2), cfg);
  REQUIRE(t.times.size() == 5);  // 0, 0.3, 0.6, 0.9, 1.0
  CHECK(t.times[1] == doctest::Approx(0.3));
  CHECK(t.times.back() == doctest::Approx(1.0));
}

TEST_CASE("splitting integrator: wrapper equivalence and weak stationarity") {
  Potential u = quadratic_potential(SpdMatrix::identity(1));
  OrderKSystem sys = order_k_system(1, 1);
  DriftModel model = glangevin_drift(u, sys.b, 2.0, 1);

  SplittingIntegrator integ(model, 0.05);
  Vector z(2);
  z << 0.4, -0.2;
  Vector noise(2);
  noise << 0.3, -1.1;
  CHECK((integ.step(z, noise) - splitting_step(model, z, 0.05, noise)).norm() == 0.0);

  // long single trajectory: stationary marginals of (X, Y) have unit variance
  IntegratorConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 10000.0;
  cfg.scheme = Scheme::Splitting;
  cfg.seed = 11;
  cfg.thinning = 10;
  Trajectory traj = simulate(model, Vector::Zero(2), cfg);
  double vx = 0, vy = 0;
  std::size_t burn = traj.states.size() / 10, cnt = 0;
  for (std::size_t i = burn; i < traj.states.size(); ++i, ++cnt) {
    vx += traj.states[i](0) * traj.states[i](0);
    vy += traj.states[i](1) * traj.states[i](1);
  }
  CHECK(vx / cnt == doctest::Approx(1.0).epsilon(0.1));
  CHECK(vy / cnt == doctest::Approx(1.0).epsilon(0.1));

  CHECK_THROWS_AS(SplittingIntegrator(langevin_drift(u, 2.0), 0.05), InvalidInput);
}

TEST_CASE("synchronous coupling cancels the noise exactly") {
  Potential u = quadratic_potential(SpdMatrix::identity(1));
  DriftModel model = langevin_drift(u, 4.0);
  IntegratorConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 2.0;
  cfg.seed = 3;

  Vector a(2), b(2);
  a << 1, 0;
  b << -1, 0.5;
  CoupledTrajectory traj = couple_sync(model, a, b, cfg);

  // for a linear drift the difference follows the deterministic recursion
  Matrix j(2, 2);
  j << 0, 1, -1, -4;
  Matrix step = Matrix::Identity(2, 2) + cfg.dt * j;
  Vector delta = a - b;
  for (long k = 0; k < cfg.steps(); ++k) delta = step * delta;
  CHECK((traj.states_a.back() - traj.states_b.back() - delta).norm() < 1e-10);

  // equal starts stay glued
  CoupledTrajectory same = couple_sync(model, a, a, cfg);
  for (std::size_t i = 0; i < same.states_a.size(); ++i)
    CHECK((same.states_a[i] - same.states_b[i]).norm() == 0.0);
}

TEST_CASE("contraction_monitor on certified coupled runs") {
  HessianBounds bounds(1, 4);
  Potential u = cosine_modulated_potential(bounds, 1);
  DriftModel model = langevin_drift(u, 4.0);
  ContractionCertificate cert = langevin_metric_simple(bounds, 4.0, 1);

  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.seed = 19;
  Vector a(2), b(2);
  a << 2, 1;
  b << -1, 0;
  CoupledTrajectory traj = couple_sync(model, a, b, cfg, &cert.m);
  REQUIRE(traj.m_distance.size() == traj.times.size());
  MonitorResult mon = contraction_monitor(traj, cert.rho);
  CHECK(mon.max_ratio <= 1.0 + 10 * cfg.dt);
  CHECK(mon.max_ratio >= 1.0 - 1e-12);  // the ratio is 1 at t = 0

  // with a wildly inflated rate the monitor must exceed 1 + O(dt)
  MonitorResult bad = contraction_monitor(traj, 50 * cert.rho);
  CHECK(bad.max_ratio > 2.0);
}

TEST_CASE("pdmp closed form and moment rates") {
  CHECK(pdmp_moment_rate(1, 1.0, 0.5, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pdmp_moment_rate(2, 1.0, 0.5, 2.0) == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(pdmp_moment_rate(3, 1.0, 0.5, 2.0) == doctest::Approx(1.0 + 1.75 / 3).epsilon(1e-14));

  Vector z0 = Vector::Constant(1, 2.0);
  PdmpTrajectory traj = pdmp_simulate(1.0, 0.5, 2.0, z0, 5.0, 123);
  // jump times are sorted and inside the horizon
  for (std::size_t i = 0; i + 1 < traj.jump_times.size(); ++i)
    CHECK(traj.jump_times[i] < traj.jump_times[i + 1]);
  if (!traj.jump_times.empty()) CHECK(traj.jump_times.back() <= 5.0);

  const double t = 2.5;
  const long nt = traj.jumps_before(t);
  CHECK(traj.state_at(t)(0) ==
        doctest::Approx(std::exp(-t) * std::pow(0.5, double(nt)) * 2.0).epsilon(1e-14));

  // determinism and replica separation
  PdmpTrajectory again = pdmp_simulate(1.0, 0.5, 2.0, z0, 5.0, 123);
  CHECK(traj.jump_times == again.jump_times);
  PdmpTrajectory other = pdmp_simulate(1.0, 0.5, 2.0, z0, 5.0, 123, 1);
  CHECK(traj.jump_times != other.jump_times);

  // mean jump count over replicas approximates lambda * t
  double total = 0;
  const int reps = 4000;
  for (int r = 0; r < reps; ++r)
    total += double(pdmp_simulate(1.0, 0.5, 2.0, z0, 5.0, 9, std::uint64_t(r)).jump_times.size());
  CHECK(total / reps == doctest::Approx(10.0).epsilon(0.05));
}
