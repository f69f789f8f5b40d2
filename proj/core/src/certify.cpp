#include "ctkit/certify.hpp"

#include <algorithm>
#include <cmath>

namespace ctkit {

namespace {

double spectral_norm(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.transpose() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// N1(xi) = [[0, -1], [xi, gamma]], the per-coordinate Jacobian factor of the
// kinetic Langevin drift (up to sign).
Matrix n1_block(double xi, double gamma) {
  Matrix n(2, 2);
  n << 0, -1, xi, gamma;
  return n;
}

}  // namespace

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::SimpleLangevin: return "simple-langevin";
    case Provenance::LemmaSearch: return "lemma-search";
    case Provenance::Generalized: return "generalized";
    case Provenance::ChainPinned: return "chain-pinned";
    case Provenance::ChainUnpinned: return "chain-unpinned";
    case Provenance::UserSupplied: return "user-supplied";
  }
  return "unknown";
}

bool sharp_condition(const HessianBounds& bounds, double gamma) {
  if (!(gamma > 0)) throw InvalidInput("sharp_condition: gamma must be positive");
  return bounds.Lambda - bounds.lambda <
         gamma * (std::sqrt(bounds.Lambda) + std::sqrt(bounds.lambda));
}

ContractionCertificate langevin_metric_simple(const HessianBounds& bounds, double gamma, int n) {
  const double g0 = 2.0 * std::sqrt(bounds.Lambda);
  if (gamma < g0 * (1.0 - 1e-12))
    throw FrictionTooLow(g0, "langevin_metric_simple: gamma < 2 sqrt(Lambda)");
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = Matrix::Identity(n, n);
  m.topRightCorner(n, n) = Matrix::Identity(n, n) / gamma;
  m.bottomLeftCorner(n, n) = Matrix::Identity(n, n) / gamma;
  m.bottomRightCorner(n, n) = Matrix::Identity(n, n) / bounds.Lambda;
  return {SpdMatrix(m), bounds.lambda / (3.0 * gamma), g0, Provenance::SimpleLangevin};
}

std::optional<std::pair<double, double>> lemma_feasible_ac(const HessianBounds& bounds,
                                                           double gamma) {
  if (!sharp_condition(bounds, gamma)) return std::nullopt;
  auto interval = [gamma](double xi) {
    const double center = 2.0 * xi / gamma + gamma;
    return std::pair{center - 2.0 * std::sqrt(xi), center + 2.0 * std::sqrt(xi)};
  };
  auto [llo, lhi] = interval(bounds.lambda);
  auto [glo, ghi] = interval(bounds.Lambda);
  const double lo = std::max({gamma / 2.0, llo, glo});
  const double hi = std::min(lhi, ghi);
  if (!(lo < hi)) return std::nullopt;  // cannot happen under the sharp condition

  const double beta = 0.5 * (lo + hi);
  const double c = 1.0 / beta;
  const double a = 2.0 * c / gamma;  // alpha = gamma a / c - 1 = 1
  if (!(c * c < a)) return std::nullopt;

  Matrix mac(2, 2);
  mac << 1, c, c, a;
  for (double xi : {bounds.lambda, bounds.Lambda}) {
    SymEig e = sym_eig(mac * n1_block(xi, gamma));
    if (!(e.values.minCoeff() > 0)) return std::nullopt;
  }
  return std::pair{a, c};
}

double best_rate(const SpdMatrix& m, const HessianBounds& bounds, double gamma) {
  Matrix m2;
  if (m.dim() == 2) {
    m2 = m.mat();
  } else {
    // accept 2n x 2n block homotheties and reduce to the scalar pattern
    if (m.dim() % 2 != 0) throw InvalidInput("best_rate: M must be 2x2 or 2n x 2n");
    const Eigen::Index n = m.dim() / 2;
    m2.resize(2, 2);
    m2 << m.mat()(0, 0), m.mat()(0, n), m.mat()(n, 0), m.mat()(n, n);
    for (int bi = 0; bi < 2; ++bi)
      for (int bj = 0; bj < 2; ++bj) {
        Matrix block = m.mat().block(bi * n, bj * n, n, n);
        if ((block - m2(bi, bj) * Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12)
          throw InvalidInput("best_rate: M is not a block homothety");
      }
  }
  SpdMatrix m2spd(m2);
  double rate = std::numeric_limits<double>::infinity();
  for (double xi : {bounds.lambda, bounds.Lambda})
    rate = std::min(rate, min_gen_eig(symmetrize(m2 * n1_block(xi, gamma)), m2spd));
  return rate;
}

SchurReduction schur_reduction(const Matrix& b, int n) {
  const Eigen::Index p = b.rows();
  if (b.cols() != p || p < n) throw InvalidInput("schur_reduction: B must be p x p with p >= n");
  if (p == n) {
    if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff()))
      throw AssumptionViolated("schur_reduction: p = n requires symmetric B");
    try {
      return {SpdMatrix(b), Matrix(n, 0)};
    } catch (const InvalidInput&) {
      throw AssumptionViolated("schur_reduction: p = n requires positive definite B");
    }
  }
  Matrix b11 = b.topLeftCorner(n, n);
  Matrix b12 = b.topRightCorner(n, p - n);
  Matrix b21 = b.bottomLeftCorner(p - n, n);
  Matrix b22 = b.bottomRightCorner(p - n, p - n);
  Eigen::FullPivLU<Matrix> lu(b22);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw Degenerate("schur_reduction: B22 is singular");
  Matrix d = lu.solve(b12.transpose()).transpose();  // D = B12 B22^{-1}
  Matrix e = b11 - d * b21;
  if ((e - e.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, e.cwiseAbs().maxCoeff()))
    throw AssumptionViolated("schur_reduction: Schur complement E is not symmetric");
  try {
    return {SpdMatrix(e), std::move(d)};
  } catch (const InvalidInput&) {
    throw AssumptionViolated("schur_reduction: Schur complement E is not positive definite");
  }
}

HConstants glangevin_h_constants(const SpdMatrix& n_metric, const SpdMatrix& e, const Matrix& d,
                                 int n, int p) {
  if (n_metric.dim() != p || e.dim() != n || d.rows() != n || d.cols() != p - n)
    throw InvalidInput("glangevin_h_constants: shape mismatch");
  Matrix ata = Matrix::Zero(p, p);  // A'A with A = (I_n, 0, ..., 0)
  ata.topLeftCorner(n, n) = Matrix::Identity(n, n);
  const Matrix& nm = n_metric.mat();

  HConstants h{};
  h.h1 = max_gen_eig(nm * ata * nm, n_metric);
  h.h2 = 1.0 / e.min_eigenvalue();
  h.h3 = e.operator_norm();
  Matrix top = Matrix::Zero(p, p);  // [[I_n, -D], [0, 0]]
  top.topLeftCorner(n, n) = Matrix::Identity(n, n);
  top.topRightCorner(n, p - n) = -d;
  h.h4 = max_gen_eig(symmetrize(top), n_metric);
  Matrix both = top;  // [[I_n, -D], [-D', 0]]
  both.bottomLeftCorner(p - n, n) = -d.transpose();
  h.h5 = max_gen_eig(both, n_metric);
  return h;
}

double glangevin_gamma0(const HConstants& h, double kappa, double Lambda) {
  if (!(kappa > 0) || !(Lambda > 0))
    throw InvalidInput("glangevin_gamma0: kappa and Lambda must be positive");
  return 2.0 * std::sqrt(h.h1 * Lambda / kappa) *
         std::max(std::sqrt(h.h2 * h.h5), std::sqrt(h.h4 / kappa));
}

ContractionCertificate glangevin_certificate(const Matrix& b, const HessianBounds& bounds,
                                             double gamma, int n, int p,
                                             const std::optional<SpdMatrix>& n_metric) {
  if (!(gamma > 0)) throw InvalidInput("glangevin_certificate: gamma must be positive");
  if (b.rows() != p || b.cols() != p) throw InvalidInput("glangevin_certificate: B must be p x p");

  SpdMatrix nm = n_metric ? *n_metric : SpdMatrix::identity(p);
  double kappa;
  if (n_metric) {
    kappa = min_gen_eig(symmetrize(nm.mat() * b), nm);
    if (!(kappa > 1e-12)) throw NotStable("glangevin_certificate: supplied N gives kappa <= 0");
  } else {
    LyapunovMetric lm = lyapunov_metric(b);
    nm = lm.n;
    kappa = lm.kappa;
  }

  SchurReduction sr = schur_reduction(b, n);
  HConstants h = glangevin_h_constants(nm, sr.e, sr.d, n, p);
  const double gamma0 = glangevin_gamma0(h, kappa, bounds.Lambda);
  if (gamma < gamma0 * (1.0 - 1e-12))
    throw FrictionTooLow(gamma0, "glangevin_certificate: gamma below certified threshold");

  const double alpha = kappa / (bounds.Lambda * h.h1);
  Matrix ainv = Matrix::Zero(p, n);  // right inverse of A, (I_n  -D)'
  ainv.topRows(n) = Matrix::Identity(n, n);
  if (p > n) ainv.bottomRows(p - n) = -sr.d.transpose();

  Matrix m = Matrix::Zero(n + p, n + p);
  m.topLeftCorner(n, n) = sr.e.mat();
  m.topRightCorner(n, p) = ainv.transpose() / gamma;
  m.bottomLeftCorner(p, n) = ainv / gamma;
  m.bottomRightCorner(p, p) = alpha * nm.mat();
  SpdMatrix mspd(m);

  const double rho = std::min(bounds.lambda / (3.0 * h.h3 * gamma), gamma * kappa / 6.0);

  // Two-sided sandwich of the theorem.
  Matrix core = Matrix::Zero(n + p, n + p);
  core.topLeftCorner(n, n) = sr.e.mat();
  core.bottomRightCorner(p, p) = alpha * nm.mat();
  if (!loewner_leq(0.5 * core, m, 1e-9) || !loewner_leq(m, 1.5 * core, 1e-9))
    throw AssumptionViolated("glangevin_certificate: sandwich bound failed");

  // Endpoint surrogate Jacobians J(xi) = [[0, A], [-xi A', -gamma B]].
  for (double xi : {bounds.lambda, bounds.Lambda}) {
    Matrix j = Matrix::Zero(n + p, n + p);
    j.block(0, n, n, n) = Matrix::Identity(n, n);
    j.block(n, 0, n, n) = -xi * Matrix::Identity(n, n);
    j.block(n, n, p, p) = -gamma * b;
    SymEig e = sym_eig(m * j + rho * m);
    if (e.values.maxCoeff() > 1e-8)
      throw AssumptionViolated("glangevin_certificate: endpoint contraction check failed");
  }

  return {std::move(mspd), rho, gamma0, Provenance::Generalized};
}

ContRReport check_cont_r(const DriftModel& model, const ContractionCertificate& cert,
                         const std::vector<Vector>& points, double tol) {
  (void)tol;
  if (points.empty()) throw InvalidInput("check_cont_r: no evaluation points");
  const Matrix& m = cert.m.mat();
  if (m.rows() != model.dim) throw InvalidInput("check_cont_r: metric dimension mismatch");

  double worst = -std::numeric_limits<double>::infinity();
  Vector worst_point;
  auto eval = [&](const Matrix& j, const Vector& z) {
    SymEig e = sym_eig(m * j + cert.rho * m);
    double v = e.values.maxCoeff();
    if (v > worst) {
      worst = v;
      worst_point = z;
    }
  };

  for (const auto& z : points) {
    if (z.size() != model.dim) throw InvalidInput("check_cont_r: point dimension mismatch");
    eval(model.jacobian(z), z);
  }

  bool endpoints = false;
  if (const auto* ls = std::get_if<LangevinStructure>(&model.structure)) {
    if (ls->potential.declared_bounds) {
      const int n = ls->n;
      for (double xi : {ls->potential.declared_bounds->lambda,
                        ls->potential.declared_bounds->Lambda}) {
        Matrix j = Matrix::Zero(2 * n, 2 * n);
        j.topRightCorner(n, n) = Matrix::Identity(n, n);
        j.bottomLeftCorner(n, n) = -xi * Matrix::Identity(n, n);
        j.bottomRightCorner(n, n) = -ls->gamma * Matrix::Identity(n, n);
        eval(j, Vector::Constant(2 * n, std::nan("")));
      }
      endpoints = true;
    }
  } else if (const auto* gs = std::get_if<GLangevinStructure>(&model.structure)) {
    if (gs->potential.declared_bounds) {
      const int n = gs->n, p = gs->p;
      for (double xi : {gs->potential.declared_bounds->lambda,
                        gs->potential.declared_bounds->Lambda}) {
        Matrix j = Matrix::Zero(n + p, n + p);
        j.block(0, n, n, n) = Matrix::Identity(n, n);
        j.block(n, 0, n, n) = -xi * Matrix::Identity(n, n);
        j.block(n, n, p, p) = -gs->gamma * gs->b;
        eval(j, Vector::Constant(n + p, std::nan("")));
      }
      endpoints = true;
    }
  }
  return {worst, worst_point, endpoints};
}

double sigma_m_norm(const Matrix& sigma, const SpdMatrix& m) {
  return spectral_norm(sigma * m.sqrt().mat());
}

double log_sobolev_constant(const Matrix& sigma, const SpdMatrix& m, double rho, double t) {
  if (t < 0) throw InvalidInput("log_sobolev_constant: t must be >= 0");
  const double smn = sigma_m_norm(sigma, m);
  const double smn2 = smn * smn;
  if (std::abs(rho) < 1e-12) return 2.0 * t * smn2;
  return smn2 * (1.0 - std::exp(-2.0 * rho * t)) / rho;
}

double concentration_bound(double t_horizon, double u, double rho, double sigma_m_norm,
                           double c_prime) {
  if (!(t_horizon > 0) || u < 0 || !(rho > 0))
    throw InvalidInput("concentration_bound: need T > 0, u >= 0, rho > 0");
  const double denom = 2.0 * sigma_m_norm * sigma_m_norm + c_prime / t_horizon;
  return std::exp(-t_horizon * rho * rho * u * u / denom);
}

double concentration_bound_discrete(int n_steps, double t0, double u, double rho,
                                    double log_sobolev_ct0, double c_prime) {
  if (n_steps < 1 || !(t0 > 0) || u < 0 || !(rho > 0))
    throw InvalidInput("concentration_bound_discrete: invalid inputs");
  const double r = 1.0 - std::exp(-rho * t0);
  const double denom = log_sobolev_ct0 + std::exp(-rho * t0) * c_prime / n_steps;
  return std::exp(-n_steps * u * u * r * r / denom);
}

double bias_bound(double t_horizon, double rho, double w1) {
  if (!(t_horizon > 0) || !(rho > 0)) throw InvalidInput("bias_bound: need T > 0, rho > 0");
  return w1 / (rho * t_horizon);
}

double l2_decay_bound(const SpdMatrix& n_metric, double rho, double t) {
  const double cond = n_metric.operator_norm() / n_metric.min_eigenvalue();
  return std::sqrt(3.0 * cond) * std::exp(-rho * t);
}

}  // namespace ctkit
