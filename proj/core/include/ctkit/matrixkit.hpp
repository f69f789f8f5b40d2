#pragma once

// Dense symmetric linear algebra used by the certificate constructions:
// Loewner-order tests, generalized eigenvalue bounds, matrix square root and
// exponential, Lyapunov metrics and exact Ornstein-Uhlenbeck moments.

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "ctkit/errors.hpp"

namespace ctkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

/// Symmetric positive definite matrix with a cached Cholesky factor.
/// Construction symmetrizes the entries and rejects non-SPD input.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix entries);

  static SpdMatrix identity(Eigen::Index dim) { return SpdMatrix(Matrix::Identity(dim, dim)); }

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }
  const Eigen::LLT<Matrix>& chol() const { return chol_; }

  /// Symmetric square root, via the eigendecomposition.
  SpdMatrix sqrt() const;
  SpdMatrix inverse() const;

  /// Spectral norm |M| = lambda_max (SPD case).
  double operator_norm() const;
  double min_eigenvalue() const;

  /// ||v||_M = sqrt(v' M v)
  double norm(const Vector& v) const;

 private:
  Matrix mat_;
  Eigen::LLT<Matrix> chol_;
};

struct SymEig {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns
};

/// Eigendecomposition of a (symmetrized) matrix.
SymEig sym_eig(const Matrix& s);

/// X <= Y in the Loewner order: lambda_min(sym(Y - X)) >= -tol.
bool loewner_leq(const Matrix& x, const Matrix& y, double tol = 1e-10);

/// Smallest h such that S <= h N, i.e. lambda_max(N^{-1/2} S N^{-1/2}).
double max_gen_eig(const Matrix& s, const SpdMatrix& n);

/// Largest k such that S >= k N.
double min_gen_eig(const Matrix& s, const SpdMatrix& n);

SpdMatrix sqrt_spd(const SpdMatrix& n);

/// Matrix exponential (Pade scaling-and-squaring).
Matrix expm(const Matrix& a);

struct LyapunovMetric {
  SpdMatrix n;
  double kappa;
};

/// Solves B' N + N B = I for the unique SPD N and returns kappa = 1/(2 lambda_max(N)),
/// the largest rate with sym(NB) >= kappa N guaranteed by this construction.
/// Throws NotStable if some eigenvalue of B has real part <= 1e-12.
LyapunovMetric lyapunov_metric(const Matrix& b);

struct OuMoments {
  Matrix mean_map;  // expm(-delta gamma B)
  Matrix cov;       // int_0^delta e^{-gamma B s} (gamma Sigma Sigma') e^{-gamma B' s} ds
};

/// Exact one-step transition moments of dY = -gamma B Y dt + sqrt(gamma) Sigma dW
/// over a step of length delta, by the Van Loan block-exponential construction.
OuMoments ou_exact_moments(const Matrix& b, const Matrix& sigma, double gamma, double delta);

}  // namespace ctkit
