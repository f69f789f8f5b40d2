#pragma once

// Time integration of constant-diffusion SDEs (Euler-Maruyama and the exact
// OU / Verlet splitting), synchronous coupling of trajectory pairs, and the
// multiplicative-jump process counterexample.

#include <cstdint>
#include <vector>

#include "ctkit/models.hpp"
#include "ctkit/rng.hpp"

namespace ctkit {

enum class Scheme { Euler, Splitting };

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::Euler;
  std::uint64_t seed = 0;
  std::uint64_t replica_index = 0;
  long thinning = 1;  // store every k-th step

  long steps() const { return static_cast<long>(std::ceil(t_end / dt - 1e-12)); }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
};

struct CoupledTrajectory {
  std::vector<double> times;
  std::vector<Vector> states_a;
  std::vector<Vector> states_b;
  std::vector<double> m_distance;  // ||Z_a - Z_b||_M, empty when no metric given
};

/// Euler-Maruyama: z <- z + dt b(z) + sqrt(dt) Sigma xi. Deterministic given
/// (seed, replica_index). Throws Diverged when the state norm exceeds 1e12.
Trajectory simulate_em(const DriftModel& model, const Vector& z0, const IntegratorConfig& cfg);

/// Strang splitting for generalized Langevin models: exact OU half-step on Y,
/// a Verlet step on the Hamiltonian part, exact OU half-step. Precomputes the
/// OU transition moments once per (model, dt).
class SplittingIntegrator {
 public:
  SplittingIntegrator(const DriftModel& model, double dt);

  /// One step; noise must hold 2p standard normals (one p-block per OU half-step).
  Vector step(const Vector& z, const Vector& noise) const;

  double dt() const { return dt_; }
  int noise_dim() const { return 2 * p_; }

 private:
  const DriftModel* model_;
  const GLangevinStructure* gs_;
  double dt_;
  int n_, p_;
  Matrix mean_map_;   // exact OU flow over dt/2
  Matrix cov_sqrt_;   // PSD square root of the OU covariance over dt/2
};

/// Single splitting step (convenience wrapper; integration loops should use
/// SplittingIntegrator to amortize the moment computation).
Vector splitting_step(const DriftModel& model, const Vector& z, double dt, const Vector& noise);

/// Integrate with the scheme selected in cfg.
Trajectory simulate(const DriftModel& model, const Vector& z0, const IntegratorConfig& cfg);

/// Two solutions driven by the identical noise stream. The M-distance series
/// is filled when a metric is supplied.
CoupledTrajectory couple_sync(const DriftModel& model, const Vector& z_a, const Vector& z_b,
                              const IntegratorConfig& cfg,
                              const SpdMatrix* metric = nullptr);

struct MonitorResult {
  double max_ratio;
  double argmax_time;
};

/// max over the grid of e^{rho t} ||Delta_t||_M / ||Delta_0||_M.
MonitorResult contraction_monitor(const CoupledTrajectory& traj, double rho);

/// Event-driven simulation of dZ = -a Z dt + (h-1) Z dN_{lambda t}: exact
/// exponential decay between exponentially spaced jumps, multiplication by h
/// at jumps. No discretization error.
struct PdmpTrajectory {
  Vector z0;
  double decay_rate;
  double jump_factor;
  std::vector<double> jump_times;  // within [0, t_end]

  long jumps_before(double t) const;
  /// Closed form e^{-a t} h^{N_t} z0.
  Vector state_at(double t) const;
};

PdmpTrajectory pdmp_simulate(double a, double h, double lam, const Vector& z0, double t_end,
                             std::uint64_t seed, std::uint64_t replica = 0);

/// rho_n = a + (1 - |h|^n) lambda / n, the decay rate of the n-th moment of
/// the coupled difference.
double pdmp_moment_rate(int n, double a, double h, double lam);

}  // namespace ctkit
