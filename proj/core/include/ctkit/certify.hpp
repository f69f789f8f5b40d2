#pragma once

// Contraction certificates (M, rho) for kinetic and generalized Langevin
// drifts, numeric verification of the matrix condition M J_b(z) <= -rho M,
// and the derived log-Sobolev, concentration and L2 decay bounds.

#include <optional>
#include <utility>
#include <vector>

#include "ctkit/models.hpp"

namespace ctkit {

enum class Provenance {
  SimpleLangevin,
  LemmaSearch,
  Generalized,
  ChainPinned,
  ChainUnpinned,
  UserSupplied,
};

const char* provenance_name(Provenance p);

struct ContractionCertificate {
  SpdMatrix m;
  double rho;                    // may be <= 0 for diagnostic certificates
  std::optional<double> gamma0;  // minimal certified friction, when known
  Provenance provenance;
};

/// Minimal scalars relating the structural matrices (N, E, D) in Loewner order.
struct HConstants {
  double h1, h2, h3, h4, h5;
};

/// Sharp friction condition: Lambda - lambda < gamma (sqrt(Lambda) + sqrt(lambda)).
bool sharp_condition(const HessianBounds& bounds, double gamma);

/// High-friction certificate M = [[I, I/gamma], [I/gamma, I/Lambda]],
/// rho = lambda / (3 gamma). Requires gamma >= 2 sqrt(Lambda).
ContractionCertificate langevin_metric_simple(const HessianBounds& bounds, double gamma, int n);

/// Searches the feasible (a, c) of the per-coordinate 2x2 certificate via the
/// interval criterion (alpha = 1, beta = midpoint of the feasible interval).
/// Empty result means no Euclidean certificate exists for these bounds.
std::optional<std::pair<double, double>> lemma_feasible_ac(const HessianBounds& bounds,
                                                           double gamma);

/// Largest rho with M N1(xi) >= rho M at both curvature endpoints, where
/// N1(xi) = [[0, -1], [xi, gamma]]. M must be 2x2 or a 2n x 2n block homothety.
double best_rate(const SpdMatrix& m, const HessianBounds& bounds, double gamma);

struct SchurReduction {
  SpdMatrix e;  // n x n effective friction
  Matrix d;     // n x (p-n), empty when p = n
};

/// E = B11 - B12 B22^{-1} B21 and D = B12 B22^{-1}; E = B, D empty when p = n.
SchurReduction schur_reduction(const Matrix& b, int n);

/// The five minimal constants of the friction threshold, via generalized
/// eigenproblems against N.
HConstants glangevin_h_constants(const SpdMatrix& n_metric, const SpdMatrix& e, const Matrix& d,
                                 int n, int p);

/// gamma0 = 2 sqrt(h1 Lambda / kappa) max(sqrt(h2 h5), sqrt(h4 / kappa))
double glangevin_gamma0(const HConstants& h, double kappa, double Lambda);

/// Full generalized-Langevin certificate pipeline: Lyapunov metric, Schur
/// reduction, h-constants, friction threshold, then
/// M = [[E, (A^-1)'/gamma], [A^-1/gamma, alpha N]] with alpha = kappa/(Lambda h1)
/// and rho = min(lambda/(3 h3 gamma), gamma kappa / 6).
ContractionCertificate glangevin_certificate(const Matrix& b, const HessianBounds& bounds,
                                             double gamma, int n, int p,
                                             const std::optional<SpdMatrix>& n_metric = std::nullopt);

struct ContRReport {
  double max_violation;  // max over states of lambda_max(sym(M J_b) + rho M)
  Vector worst_point;
  bool endpoints_checked;  // true when the global endpoint-surrogate argument applied
  bool passed(double tol = 1e-10) const { return max_violation <= tol; }
};

/// Checks M J_b(z) <= -rho M at the given states; for Langevin-structured
/// models with block-homothety M the two endpoint surrogate Hessians
/// (lambda I, Lambda I) are evaluated as well, which certifies globally.
ContRReport check_cont_r(const DriftModel& model, const ContractionCertificate& cert,
                         const std::vector<Vector>& points, double tol = 1e-10);

/// |Sigma M^{1/2}|, the spectral norm entering the functional inequalities.
double sigma_m_norm(const Matrix& sigma, const SpdMatrix& m);

/// C_t = |Sigma M^{1/2}|^2 (1 - e^{-2 rho t}) / rho, with the 2t branch at rho = 0.
double log_sobolev_constant(const Matrix& sigma, const SpdMatrix& m, double rho, double t);

/// Continuous-time ergodic-average tail bound
/// exp(-T rho^2 u^2 / (2 |Sigma M^{1/2}|^2 + C'/T)).
double concentration_bound(double t_horizon, double u, double rho, double sigma_m_norm,
                           double c_prime);

/// Discrete-time variant over n steps of size t0.
double concentration_bound_discrete(int n_steps, double t0, double u, double rho,
                                    double log_sobolev_ct0, double c_prime);

/// Bias of the ergodic average: W_{M,1}(nu, mu_inf) / (rho T).
double bias_bound(double t_horizon, double rho, double w1);

/// sqrt(3 |N^-1| |N|) e^{-rho t}
double l2_decay_bound(const SpdMatrix& n_metric, double rho, double t);

}  // namespace ctkit
