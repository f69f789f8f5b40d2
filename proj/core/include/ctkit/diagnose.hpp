#pragma once

// Empirical statistics layer: exact small-sample Wasserstein distances,
// contraction-factor estimation, decay-rate regression, and ergodic-mean
// concentration checks against the certified bounds.

#include <vector>

#include "ctkit/certify.hpp"
#include "ctkit/simulate.hpp"

namespace ctkit {

/// Equal-weight point cloud in R^d.
struct EmpiricalMeasure {
  std::vector<Vector> points;

  Eigen::Index dim() const { return points.empty() ? 0 : points.front().size(); }
  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

enum class WassersteinOrder { W1, W2, WInf };

/// Exact optimal-assignment W_p between equal-size clouds under the M-weighted
/// norm: shortest augmenting path for p in {1, 2}, bottleneck matching for
/// p = infinity. Sample counts must match and be <= 4096.
double empirical_wp(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                    WassersteinOrder order, const SpdMatrix& metric);

struct ContractionTestPoint {
  double t;
  double w_emp;
  double bound;    // e^{-rho t} W(init) + bootstrap margin
  double slack;    // bound - w_emp (negative means violation)
  bool violated;
};

struct ContractionTestReport {
  std::vector<ContractionTestPoint> points;
  double w_init;
  bool passed;
};

/// Evolves the two clouds by independent simulation per leg (shared config,
/// distinct substreams) and compares the empirical W_p at each time against
/// e^{-rho t} W_p(init) plus a nonparametric bootstrap margin (200 resamples).
ContractionTestReport wasserstein_contraction_test(const DriftModel& model,
                                                   const ContractionCertificate& cert,
                                                   const EmpiricalMeasure& init_a,
                                                   const EmpiricalMeasure& init_b,
                                                   const std::vector<double>& times,
                                                   const IntegratorConfig& cfg,
                                                   WassersteinOrder order = WassersteinOrder::W2);

struct DecayFit {
  double rate;       // minus the slope of log(value) vs t
  double intercept;  // value extrapolated to t = 0 (log scale intercept, exponentiated)
  double r2;
};

/// Least squares on log(value) against t; values must be positive.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& series);

/// Affine observable f(z) = w . z + c; the Lipschitz constant in the
/// M^{-1}-weighted dual norm is sqrt(w' M^{-1} w), exact.
struct AffineObservable {
  Vector w;
  double c = 0.0;

  double operator()(const Vector& z) const { return w.dot(z) + c; }
  double lipschitz(const SpdMatrix& m) const {
    return std::sqrt(w.dot(m.chol().solve(w)));
  }
};

struct ConcentrationPoint {
  double u;
  double empirical;  // tail frequency over replicas
  double bound;      // certified bound
  double margin;     // binomial CI margin
  bool violated;     // empirical > bound + margin
};

struct ConcentrationReport {
  std::vector<ConcentrationPoint> points;
  double mean_ergodic_average;  // across replicas
  bool passed;
};

/// Runs replicas of the ergodic average (1/T) int_0^T f(Z_t) dt from a fixed
/// initial state (so the initial law is a Dirac, log-Sobolev constant 0),
/// centers by the cross-replica mean, and compares one-sided tail frequencies
/// at each u against the certified continuous-time bound plus a binomial
/// confidence margin.
ConcentrationReport ergodic_concentration_check(const DriftModel& model,
                                                const ContractionCertificate& cert,
                                                const AffineObservable& f, double t_horizon,
                                                const std::vector<double>& u_grid, int replicas,
                                                const IntegratorConfig& cfg);

}  // namespace ctkit
