#pragma once

// Potential and drift constructors: convex potentials with prescribed Hessian
// ranges, classical and generalized Langevin drifts, oscillator chains and
// order-K lifted systems.

#include <functional>
#include <optional>
#include <utility>
#include <variant>

#include "ctkit/matrixkit.hpp"

namespace ctkit {

/// Uniform Hessian bounds: lambda I <= hess U(x) <= Lambda I for all x.
struct HessianBounds {
  double lambda;
  double Lambda;

  HessianBounds(double lam, double Lam) : lambda(lam), Lambda(Lam) {
    if (!(0 < lam && lam <= Lam))
      throw InvalidInput("HessianBounds: need 0 < lambda <= Lambda");
  }
};

struct Potential {
  int dim = 0;
  std::function<double(const Vector&)> eval;
  std::function<Vector(const Vector&)> grad;
  std::function<Matrix(const Vector&)> hess;
  std::optional<HessianBounds> declared_bounds;
  /// Scalar Hessian range (may include negative values, e.g. interaction
  /// potentials); set for the separable families built here.
  std::optional<std::pair<double, double>> hess_range;
};

struct LangevinStructure {
  Potential potential;
  double gamma;
  int n;
};

struct GLangevinStructure {
  Potential potential;
  Matrix b;  // p x p friction block
  double gamma;
  int n;
  int p;
};

struct GenericStructure {};

using ModelStructure = std::variant<GenericStructure, LangevinStructure, GLangevinStructure>;

/// Constant-diffusion SDE  dZ = b(Z) dt + Sigma dW.
struct DriftModel {
  int dim = 0;
  std::function<Vector(const Vector&)> drift;
  std::function<Matrix(const Vector&)> jacobian;
  Matrix sigma;  // dim x dim, constant
  ModelStructure structure;
};

/// U(x) = x . S x / 2
Potential quadratic_potential(const SpdMatrix& s);

/// Separable potential whose scalar curvature sweeps exactly [lambda, Lambda]:
/// u''(s) = lambda + (Lambda - lambda)(1 + cos s)/2.
Potential cosine_modulated_potential(const HessianBounds& bounds, int n);

/// Kinetic Langevin drift b(x,y) = (y, -grad U(x) - gamma y) with
/// Sigma = sqrt(2 gamma) diag(0, I). Optional per-site temperatures scale the
/// noise block as diag(sqrt(2 gamma T_i)).
DriftModel langevin_drift(const Potential& u, double gamma,
                          const std::optional<Vector>& temperatures = std::nullopt);

struct OrderKSystem {
  Matrix a;  // n x p selector (I_n, 0, ..., 0)
  Matrix b;  // p x p tridiagonal block pattern
};

/// The order-(K+1) Langevin lift: p = K n, B with -I on the superdiagonal,
/// I on the subdiagonal and I in the last diagonal block. K = 1 gives B = I.
OrderKSystem order_k_system(int k, int n);

/// Generalized Langevin drift dX = A Y dt, dY = -A' grad U dt - gamma B Y dt
/// + sqrt(gamma) Sigma dW with A = (I_n, 0, ..., 0). When
/// fluctuation_dissipation is set, Sigma is the symmetric square root of
/// B + B' (throws FDViolation if that is not PSD).
DriftModel glangevin_drift(const Potential& u, const Matrix& b, double gamma, int p,
                           bool fluctuation_dissipation = true);

/// Chain potential U(x) = sum_i V(x_i) + sum_i F(x_i - x_{i+1}) on R^{p*ncount}.
/// V may be absent (unpinned chain). F must be even (checked on random probes).
Potential chain_potential(const std::optional<Potential>& v, const Potential& f, int ncount);

/// Hessian bounds for the pinned chain: lambda = lambda_V - 4 kappa_minus,
/// Lambda = |hess V|_inf + 4 |hess F|_inf, independent of the chain length.
HessianBounds chain_bounds_pinned(const Potential& v, const Potential& f, double kappa_minus);

/// Orthonormal basis of the zero-mean subspace (Helmert rows tensor I_p):
/// Q is p(N-1) x pN with Q Q' = I and Q 1 = 0.
Matrix unpinned_projection(int ncount, int p);

/// Bounds for the projected unpinned chain: lambda = kappa / N^2,
/// Lambda = 4 |hess F|_inf.
HessianBounds chain_bounds_unpinned(const Potential& f, int ncount);

/// Potential of the projected process, U^c(x) = U(Q' x).
Potential projected_potential(const Potential& u, const Matrix& q);

}  // namespace ctkit
