#include "ctkit/matrixkit.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace ctkit {

namespace {

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entries");
}

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) throw InvalidInput(std::string(what) + ": matrix not square");
}

}  // namespace

SpdMatrix::SpdMatrix(Matrix entries) {
  require_square(entries, "SpdMatrix");
  require_finite(entries, "SpdMatrix");
  mat_ = symmetrize(entries);
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw InvalidInput("SpdMatrix: smallest eigenvalue is not positive");
  chol_.compute(mat_);
  if (chol_.info() != Eigen::Success)
    throw InvalidInput("SpdMatrix: Cholesky factorization failed");
}

SpdMatrix SpdMatrix::sqrt() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_);
  Matrix r = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
             es.eigenvectors().transpose();
  return SpdMatrix(r);
}

SpdMatrix SpdMatrix::inverse() const {
  Matrix inv = chol_.solve(Matrix::Identity(dim(), dim()));
  return SpdMatrix(inv);
}

double SpdMatrix::operator_norm() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double SpdMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double SpdMatrix::norm(const Vector& v) const { return std::sqrt(v.dot(mat_ * v)); }

SymEig sym_eig(const Matrix& s) {
  require_square(s, "sym_eig");
  require_finite(s, "sym_eig");
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(s));
  return {es.eigenvalues(), es.eigenvectors()};
}

bool loewner_leq(const Matrix& x, const Matrix& y, double tol) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw InvalidInput("loewner_leq: dimension mismatch");
  SymEig e = sym_eig(y - x);
  return e.values.minCoeff() >= -tol;
}

double max_gen_eig(const Matrix& s, const SpdMatrix& n) {
  if (s.rows() != n.dim() || s.cols() != n.dim())
    throw InvalidInput("max_gen_eig: dimension mismatch");
  // N^{-1/2} S N^{-1/2} via the Cholesky factor: solve L X L' = sym(S).
  Matrix l = n.chol().matrixL();
  Matrix t = l.triangularView<Eigen::Lower>().solve(symmetrize(s));
  Matrix w = l.triangularView<Eigen::Lower>().solve(t.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(w), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double min_gen_eig(const Matrix& s, const SpdMatrix& n) {
  return -max_gen_eig(-s, n);
}

SpdMatrix sqrt_spd(const SpdMatrix& n) { return n.sqrt(); }

Matrix expm(const Matrix& a) {
  require_square(a, "expm");
  require_finite(a, "expm");
  return a.exp();
}

LyapunovMetric lyapunov_metric(const Matrix& b) {
  require_square(b, "lyapunov_metric");
  require_finite(b, "lyapunov_metric");
  const Eigen::Index p = b.rows();

  Eigen::EigenSolver<Matrix> es(b);
  if (es.eigenvalues().real().minCoeff() <= 1e-12)
    throw NotStable("lyapunov_metric: B has an eigenvalue with real part <= 1e-12");

  // vec(B'N + NB) = (I (x) B' + B' (x) I) vec(N) = vec(I)
  Matrix k = Matrix::Zero(p * p, p * p);
  for (Eigen::Index i = 0; i < p; ++i)
    k.block(i * p, i * p, p, p) += b.transpose();
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      k.block(i * p, j * p, p, p) += b(j, i) * Matrix::Identity(p, p);
  Matrix eye = Matrix::Identity(p, p);
  Vector rhs = Eigen::Map<const Vector>(eye.data(), p * p);
  Vector x = k.partialPivLu().solve(rhs);
  Matrix nmat = Eigen::Map<Matrix>(x.data(), p, p);

  SpdMatrix n(symmetrize(nmat));
  double kappa = 1.0 / (2.0 * n.operator_norm());
  // sym(NB) = (B'N + NB)/2 = I/2 >= kappa N by construction; verify anyway.
  Matrix snb = symmetrize(n.mat() * b);
  if (!loewner_leq(kappa * n.mat(), snb, 1e-10))
    throw NotStable("lyapunov_metric: post-check sym(NB) >= kappa N failed");
  return {std::move(n), kappa};
}

OuMoments ou_exact_moments(const Matrix& b, const Matrix& sigma, double gamma, double delta) {
  require_square(b, "ou_exact_moments");
  if (sigma.rows() != b.rows()) throw InvalidInput("ou_exact_moments: Sigma dimension mismatch");
  if (!(delta > 0)) throw InvalidInput("ou_exact_moments: delta must be positive");
  const Eigen::Index p = b.rows();
  const Matrix a = -gamma * b;               // drift matrix of dY = A Y dt + ...
  const Matrix q = gamma * sigma * sigma.transpose();

  // Van Loan: expm(delta [[A, Q], [0, -A']]) = [[e^{dA}, e^{dA} C], [0, e^{-dA'}]]
  // with C = int_0^d e^{-As} Q e^{-A's} ds, so cov = e^{dA} C e^{dA'} = F11 * F12'... use
  // the standard form: cov = F12 * F22^{-1} with F22 = e^{-dA'}; equivalently F12 * e^{dA'}.
  Matrix block = Matrix::Zero(2 * p, 2 * p);
  block.topLeftCorner(p, p) = a;
  block.topRightCorner(p, p) = q;
  block.bottomRightCorner(p, p) = -a.transpose();
  Matrix f = expm(delta * block);
  Matrix mean_map = f.topLeftCorner(p, p);  // = expm(-delta gamma B)
  Matrix cov = symmetrize(f.topRightCorner(p, p) * mean_map.transpose());
  return {std::move(mean_map), std::move(cov)};
}

}  // namespace ctkit
