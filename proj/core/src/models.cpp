#include "ctkit/models.hpp"

#include <cmath>
#include <random>

namespace ctkit {

Potential quadratic_potential(const SpdMatrix& s) {
  Potential u;
  u.dim = static_cast<int>(s.dim());
  Matrix m = s.mat();
  u.eval = [m](const Vector& x) { return 0.5 * x.dot(m * x); };
  u.grad = [m](const Vector& x) { return Vector(m * x); };
  u.hess = [m](const Vector&) { return m; };
  SymEig e = sym_eig(m);
  u.declared_bounds = HessianBounds(e.values.minCoeff(), e.values.maxCoeff());
  u.hess_range = {e.values.minCoeff(), e.values.maxCoeff()};
  return u;
}

Potential cosine_modulated_potential(const HessianBounds& bounds, int n) {
  const double lam = bounds.lambda, gap = bounds.Lambda - bounds.lambda;
  auto u1 = [=](double s) { return lam * s + 0.5 * gap * (s + std::sin(s)); };
  auto u2 = [=](double s) { return lam + 0.5 * gap * (1.0 + std::cos(s)); };
  auto u0 = [=](double s) { return 0.5 * lam * s * s + 0.5 * gap * (0.5 * s * s + 1.0 - std::cos(s)); };

  Potential u;
  u.dim = n;
  u.eval = [=](const Vector& x) {
    double v = 0;
    for (auto s : x) v += u0(s);
    return v;
  };
  u.grad = [=](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = u1(x[i]);
    return g;
  };
  u.hess = [=](const Vector& x) {
    Matrix h = Matrix::Zero(x.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) h(i, i) = u2(x[i]);
    return h;
  };
  u.declared_bounds = bounds;
  u.hess_range = {bounds.lambda, bounds.Lambda};
  return u;
}

DriftModel langevin_drift(const Potential& u, double gamma,
                          const std::optional<Vector>& temperatures) {
  if (!(gamma > 0)) throw InvalidInput("langevin_drift: gamma must be positive");
  const int n = u.dim;
  DriftModel m;
  m.dim = 2 * n;
  m.drift = [u, gamma, n](const Vector& z) {
    Vector x = z.head(n), y = z.tail(n);
    Vector out(2 * n);
    out.head(n) = y;
    out.tail(n) = -u.grad(x) - gamma * y;
    return out;
  };
  m.jacobian = [u, gamma, n](const Vector& z) {
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Matrix::Identity(n, n);
    j.bottomLeftCorner(n, n) = -u.hess(z.head(n));
    j.bottomRightCorner(n, n) = -gamma * Matrix::Identity(n, n);
    return j;
  };
  m.sigma = Matrix::Zero(2 * n, 2 * n);
  if (temperatures) {
    if (temperatures->size() != n) throw InvalidInput("langevin_drift: temperature size mismatch");
    for (int i = 0; i < n; ++i) {
      if ((*temperatures)[i] < 0) throw InvalidInput("langevin_drift: negative temperature");
      m.sigma(n + i, n + i) = std::sqrt(2.0 * gamma * (*temperatures)[i]);
    }
  } else {
    m.sigma.bottomRightCorner(n, n) = std::sqrt(2.0 * gamma) * Matrix::Identity(n, n);
  }
  m.structure = LangevinStructure{u, gamma, n};
  return m;
}

OrderKSystem order_k_system(int k, int n) {
  if (k < 1) throw InvalidInput("order_k_system: K must be >= 1");
  const int p = k * n;
  Matrix a = Matrix::Zero(n, p);
  a.leftCols(n) = Matrix::Identity(n, n);
  Matrix b = Matrix::Zero(p, p);
  for (int i = 0; i < k; ++i) {
    if (i + 1 < k) {
      b.block(i * n, (i + 1) * n, n, n) = -Matrix::Identity(n, n);
      b.block((i + 1) * n, i * n, n, n) = Matrix::Identity(n, n);
    }
  }
  b.bottomRightCorner(n, n) += Matrix::Identity(n, n);
  return {std::move(a), std::move(b)};
}

DriftModel glangevin_drift(const Potential& u, const Matrix& b, double gamma, int p,
                           bool fluctuation_dissipation) {
  const int n = u.dim;
  if (p < n) throw InvalidInput("glangevin_drift: p must be >= n");
  if (b.rows() != p || b.cols() != p) throw InvalidInput("glangevin_drift: B must be p x p");

  DriftModel m;
  m.dim = n + p;
  Matrix bcopy = b;
  m.drift = [u, bcopy, gamma, n, p](const Vector& z) {
    Vector x = z.head(n), y = z.tail(p);
    Vector out(n + p);
    out.head(n) = y.head(n);  // A y with A = (I_n, 0, ..., 0)
    out.tail(p) = -gamma * (bcopy * y);
    out.segment(n, n) -= u.grad(x);
    return out;
  };
  m.jacobian = [u, bcopy, gamma, n, p](const Vector& z) {
    Matrix j = Matrix::Zero(n + p, n + p);
    j.block(0, n, n, n) = Matrix::Identity(n, n);
    j.block(n, 0, n, n) = -u.hess(z.head(n));
    j.block(n, n, p, p) -= gamma * bcopy;
    return j;
  };
  m.sigma = Matrix::Zero(n + p, n + p);
  if (fluctuation_dissipation) {
    Matrix bsym = symmetrize(b + b.transpose());
    SymEig e = sym_eig(bsym);
    if (e.values.minCoeff() < -1e-12)
      throw FDViolation("glangevin_drift: B + B' has a negative eigenvalue");
    Matrix root = e.vectors * e.values.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                  e.vectors.transpose();
    m.sigma.bottomRightCorner(p, p) = std::sqrt(gamma) * root;
  }
  m.structure = GLangevinStructure{u, b, gamma, n, p};
  return m;
}

Potential chain_potential(const std::optional<Potential>& v, const Potential& f, int ncount) {
  if (ncount < 1) throw InvalidInput("chain_potential: need at least one particle");
  const int p = f.dim;
  if (v && v->dim != p) throw InvalidInput("chain_potential: V and F dimension mismatch");

  {  // evenness of F, probed at deterministic pseudo-random points
    std::mt19937_64 gen(0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> nd;
    for (int probe = 0; probe < 32; ++probe) {
      Vector s(p);
      for (auto& c : s.reshaped()) c = nd(gen);
      if (std::abs(f.eval(s) - f.eval(-s)) > 1e-10)
        throw InvalidInput("chain_potential: interaction potential is not even");
    }
  }

  Potential u;
  u.dim = p * ncount;
  u.eval = [v, f, ncount, p](const Vector& x) {
    double val = 0;
    for (int i = 0; i < ncount; ++i) {
      if (v) val += v->eval(x.segment(i * p, p));
      if (i + 1 < ncount) val += f.eval(x.segment(i * p, p) - x.segment((i + 1) * p, p));
    }
    return val;
  };
  u.grad = [v, f, ncount, p](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    for (int i = 0; i < ncount; ++i) {
      if (v) g.segment(i * p, p) += v->grad(x.segment(i * p, p));
      if (i + 1 < ncount) {
        Vector df = f.grad(x.segment(i * p, p) - x.segment((i + 1) * p, p));
        g.segment(i * p, p) += df;
        g.segment((i + 1) * p, p) -= df;
      }
    }
    return g;
  };
  u.hess = [v, f, ncount, p](const Vector& x) {
    Matrix h = Matrix::Zero(x.size(), x.size());
    for (int i = 0; i < ncount; ++i) {
      if (v) h.block(i * p, i * p, p, p) += v->hess(x.segment(i * p, p));
      if (i + 1 < ncount) {
        Matrix hf = f.hess(x.segment(i * p, p) - x.segment((i + 1) * p, p));
        h.block(i * p, i * p, p, p) += hf;
        h.block((i + 1) * p, (i + 1) * p, p, p) += hf;
        h.block(i * p, (i + 1) * p, p, p) -= hf;
        h.block((i + 1) * p, i * p, p, p) -= hf;
      }
    }
    return h;
  };
  return u;
}

namespace {

std::pair<double, double> require_range(const Potential& pot, const char* what) {
  if (!pot.hess_range) throw InvalidInput(std::string(what) + ": missing declared Hessian range");
  return *pot.hess_range;
}

}  // namespace

HessianBounds chain_bounds_pinned(const Potential& v, const Potential& f, double kappa_minus) {
  auto [flo, fhi] = require_range(f, "chain_bounds_pinned(F)");
  auto [vlo, vhi] = require_range(v, "chain_bounds_pinned(V)");
  if (flo < -kappa_minus - 1e-12)
    throw InvalidInput("chain_bounds_pinned: hess F below -kappa_minus");
  const double lambda = vlo - 4.0 * kappa_minus;
  if (!(lambda > 0))
    throw InvalidInput("chain_bounds_pinned: hess V must dominate 4 kappa_minus");
  const double fnorm = std::max(std::abs(flo), std::abs(fhi));
  const double vnorm = std::max(std::abs(vlo), std::abs(vhi));
  return HessianBounds(lambda, vnorm + 4.0 * fnorm);
}

Matrix unpinned_projection(int ncount, int p) {
  if (ncount < 2) throw InvalidInput("unpinned_projection: need N >= 2");
  Matrix h = Matrix::Zero(ncount - 1, ncount);
  for (int k = 1; k < ncount; ++k) {
    const double norm = std::sqrt(double(k) * (k + 1));
    for (int j = 0; j < k; ++j) h(k - 1, j) = 1.0 / norm;
    h(k - 1, k) = -double(k) / norm;
  }
  if (p == 1) return h;
  Matrix q = Matrix::Zero((ncount - 1) * p, ncount * p);
  for (int i = 0; i < ncount - 1; ++i)
    for (int j = 0; j < ncount; ++j)
      q.block(i * p, j * p, p, p) = h(i, j) * Matrix::Identity(p, p);
  return q;
}

HessianBounds chain_bounds_unpinned(const Potential& f, int ncount) {
  auto [flo, fhi] = require_range(f, "chain_bounds_unpinned(F)");
  if (!(flo > 0)) throw InvalidInput("chain_bounds_unpinned: F must be uniformly convex");
  const double fnorm = std::max(std::abs(flo), std::abs(fhi));
  return HessianBounds(flo / (double(ncount) * ncount), 4.0 * fnorm);
}

Potential projected_potential(const Potential& u, const Matrix& q) {
  if (q.cols() != u.dim) throw InvalidInput("projected_potential: Q column count mismatch");
  Potential uc;
  uc.dim = static_cast<int>(q.rows());
  uc.eval = [u, q](const Vector& x) { return u.eval(q.transpose() * x); };
  uc.grad = [u, q](const Vector& x) { return Vector(q * u.grad(q.transpose() * x)); };
  uc.hess = [u, q](const Vector& x) { return Matrix(q * u.hess(q.transpose() * x) * q.transpose()); };
  return uc;
}

}  // namespace ctkit
