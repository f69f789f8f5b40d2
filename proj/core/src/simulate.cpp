#include "ctkit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace ctkit {

namespace {

constexpr double kDivergenceThreshold = 1e12;

void check_finite_state(const Vector& z, long step) {
  if (!z.allFinite() || z.norm() > kDivergenceThreshold)
    throw Diverged(step, "trajectory diverged at step " + std::to_string(step));
}

Matrix psd_sqrt(const Matrix& a) {
  SymEig e = sym_eig(a);
  return e.vectors * e.values.cwiseMax(0.0).cwiseSqrt().asDiagonal() * e.vectors.transpose();
}

}  // namespace

Trajectory simulate_em(const DriftModel& model, const Vector& z0, const IntegratorConfig& cfg) {
  if (z0.size() != model.dim) throw InvalidInput("simulate_em: initial state dimension mismatch");
  if (!(cfg.dt > 0) || cfg.t_end < 0) throw InvalidInput("simulate_em: invalid time grid");

  NoiseStream stream(cfg.seed, cfg.replica_index, 0);
  const double sqdt = std::sqrt(cfg.dt);
  const long steps = cfg.steps();

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(z0);
  Vector z = z0;
  for (long k = 0; k < steps; ++k) {
    Vector xi = stream.gaussians(std::uint64_t(k), model.dim);
    z += cfg.dt * model.drift(z) + sqdt * (model.sigma * xi);
    check_finite_state(z, k + 1);
    if ((k + 1) % cfg.thinning == 0 || k + 1 == steps) {
      traj.times.push_back((k + 1) * cfg.dt);
      traj.states.push_back(z);
    }
  }
  return traj;
}

SplittingIntegrator::SplittingIntegrator(const DriftModel& model, double dt)
    : model_(&model), dt_(dt) {
  gs_ = std::get_if<GLangevinStructure>(&model.structure);
  if (!gs_) throw InvalidInput("SplittingIntegrator: model lacks generalized Langevin structure");
  if (!(dt > 0)) throw InvalidInput("SplittingIntegrator: dt must be positive");
  n_ = gs_->n;
  p_ = gs_->p;
  Matrix sigma_p = model.sigma.bottomRightCorner(p_, p_) / std::sqrt(gs_->gamma);
  OuMoments m = ou_exact_moments(gs_->b, sigma_p, gs_->gamma, dt / 2.0);
  mean_map_ = m.mean_map;
  cov_sqrt_ = psd_sqrt(m.cov);
}

Vector SplittingIntegrator::step(const Vector& z, const Vector& noise) const {
  if (noise.size() != 2 * p_) throw InvalidInput("SplittingIntegrator: noise size mismatch");
  Vector x = z.head(n_);
  Vector y = z.tail(p_);
  const Potential& u = gs_->potential;

  y = mean_map_ * y + cov_sqrt_ * noise.head(p_);
  // Verlet on (x, y) with A = (I_n, 0, ..., 0)
  y.head(n_) -= 0.5 * dt_ * u.grad(x);
  x += dt_ * y.head(n_);
  y.head(n_) -= 0.5 * dt_ * u.grad(x);
  y = mean_map_ * y + cov_sqrt_ * noise.tail(p_);

  Vector out(n_ + p_);
  out << x, y;
  return out;
}

Vector splitting_step(const DriftModel& model, const Vector& z, double dt, const Vector& noise) {
  return SplittingIntegrator(model, dt).step(z, noise);
}

Trajectory simulate(const DriftModel& model, const Vector& z0, const IntegratorConfig& cfg) {
  if (cfg.scheme == Scheme::Euler) return simulate_em(model, z0, cfg);

  SplittingIntegrator integ(model, cfg.dt);
  NoiseStream stream(cfg.seed, cfg.replica_index, 0);
  const long steps = cfg.steps();

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(z0);
  Vector z = z0;
  for (long k = 0; k < steps; ++k) {
    Vector xi = stream.gaussians(std::uint64_t(k), integ.noise_dim());
    z = integ.step(z, xi);
    check_finite_state(z, k + 1);
    if ((k + 1) % cfg.thinning == 0 || k + 1 == steps) {
      traj.times.push_back((k + 1) * cfg.dt);
      traj.states.push_back(z);
    }
  }
  return traj;
}

CoupledTrajectory couple_sync(const DriftModel& model, const Vector& z_a, const Vector& z_b,
                              const IntegratorConfig& cfg, const SpdMatrix* metric) {
  if (z_a.size() != model.dim || z_b.size() != model.dim)
    throw InvalidInput("couple_sync: initial state dimension mismatch");

  NoiseStream stream(cfg.seed, cfg.replica_index, 0);
  const long steps = cfg.steps();
  const double sqdt = std::sqrt(cfg.dt);

  std::unique_ptr<SplittingIntegrator> integ;
  if (cfg.scheme == Scheme::Splitting)
    integ = std::make_unique<SplittingIntegrator>(model, cfg.dt);
  const Eigen::Index noise_dim = integ ? integ->noise_dim() : model.dim;

  CoupledTrajectory traj;
  auto record = [&](double t, const Vector& a, const Vector& b) {
    traj.times.push_back(t);
    traj.states_a.push_back(a);
    traj.states_b.push_back(b);
    if (metric) traj.m_distance.push_back(metric->norm(a - b));
  };

  Vector a = z_a, b = z_b;
  record(0.0, a, b);
  for (long k = 0; k < steps; ++k) {
    Vector xi = stream.gaussians(std::uint64_t(k), noise_dim);
    if (integ) {
      a = integ->step(a, xi);
      b = integ->step(b, xi);
    } else {
      a += cfg.dt * model.drift(a) + sqdt * (model.sigma * xi);
      b += cfg.dt * model.drift(b) + sqdt * (model.sigma * xi);
    }
    check_finite_state(a, k + 1);
    check_finite_state(b, k + 1);
    if ((k + 1) % cfg.thinning == 0 || k + 1 == steps)
      record((k + 1) * cfg.dt, a, b);
  }
  return traj;
}

MonitorResult contraction_monitor(const CoupledTrajectory& traj, double rho) {
  if (traj.m_distance.empty()) throw InvalidInput("contraction_monitor: no M-distance series");
  const double d0 = traj.m_distance.front();
  if (!(d0 > 0)) throw InvalidInput("contraction_monitor: zero initial distance");

  MonitorResult res{-std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double ratio = std::exp(rho * traj.times[i]) * traj.m_distance[i] / d0;
    if (ratio > res.max_ratio) {
      res.max_ratio = ratio;
      res.argmax_time = traj.times[i];
    }
  }
  return res;
}

long PdmpTrajectory::jumps_before(double t) const {
  return static_cast<long>(std::upper_bound(jump_times.begin(), jump_times.end(), t) -
                           jump_times.begin());
}

Vector PdmpTrajectory::state_at(double t) const {
  return std::exp(-decay_rate * t) * std::pow(jump_factor, double(jumps_before(t))) * z0;
}

PdmpTrajectory pdmp_simulate(double a, double h, double lam, const Vector& z0, double t_end,
                             std::uint64_t seed, std::uint64_t replica) {
  if (lam < 0) throw InvalidInput("pdmp_simulate: jump rate must be >= 0");
  PdmpTrajectory traj{z0, a, h, {}};
  if (lam == 0.0) return traj;
  NoiseStream stream(seed, replica, 1);
  double t = 0.0;
  for (std::uint64_t k = 0;; ++k) {
    t += stream.exponential(k, 0, lam);
    if (t > t_end) break;
    traj.jump_times.push_back(t);
  }
  return traj;
}

double pdmp_moment_rate(int n, double a, double h, double lam) {
  if (n < 1) throw InvalidInput("pdmp_moment_rate: moment order must be >= 1");
  return a + (1.0 - std::pow(std::abs(h), double(n))) * lam / double(n);
}

}  // namespace ctkit
