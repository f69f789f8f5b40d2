// Acceptance gate: the twelve release criteria, one pass/fail line each.
// Exits nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ctkit/certify.hpp"
#include "ctkit/diagnose.hpp"
#include "ctkit/models.hpp"
#include "ctkit/rng.hpp"
#include "ctkit/simulate.hpp"

using namespace ctkit;

namespace {

struct Gate {
  int failures = 0;

  void run(int index, const std::string& title, const std::function<bool()>& body) {
    bool ok = false;
    std::string note;
    try {
      ok = body();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    std::printf("criterion %2d: %s — %s%s\n", index, ok ? "PASS" : "FAIL", title.c_str(),
                note.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

bool approx(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::vector<Vector> gaussian_states(int count, int dim, std::uint64_t seed, double spread) {
  NoiseStream stream(seed, 0, 7);
  std::vector<Vector> out;
  for (int i = 0; i < count; ++i)
    out.push_back(spread * stream.gaussians(std::uint64_t(i), dim));
  return out;
}

// worst per-replica excess of max_t e^{rho t} |Delta_t|_M / |Delta_0|_M above 1
double coupling_excess(const DriftModel& model, const ContractionCertificate& cert, double dt,
                       double t_end, int replicas, std::uint64_t seed) {
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.seed = seed;
  double worst = 0.0;
  for (int r = 0; r < replicas; ++r) {
    cfg.replica_index = std::uint64_t(r);
    NoiseStream init(seed, std::uint64_t(r), 9);
    Vector a = 2.0 * init.gaussians(0, model.dim);
    Vector b = 2.0 * init.gaussians(1, model.dim);
    CoupledTrajectory traj = couple_sync(model, a, b, cfg, &cert.m);
    worst = std::max(worst, contraction_monitor(traj, cert.rho).max_ratio - 1.0);
  }
  return worst;
}

// criterion-4 style check: every replica within 1 + C dt, with C calibrated by
// a dt/2 run (the excess must scale roughly linearly in dt, ratio 2 +/- 30%,
// unless both excesses are negligibly small)
bool coupling_criterion(const DriftModel& model, const ContractionCertificate& cert, double dt,
                        double t_end, int replicas, std::uint64_t seed) {
  const double e1 = coupling_excess(model, cert, dt, t_end, replicas, seed);
  const double e2 = coupling_excess(model, cert, dt / 2, t_end, replicas, seed);
  if (e1 <= 1e-9 && e2 <= 1e-9) return true;  // strictly contracting at this rate
  if (!(e2 > 0)) return false;
  const double ratio = e1 / e2;
  if (ratio < 1.4 || ratio > 2.6) return false;
  const double c = 1.5 * e2 / (dt / 2);  // calibrated slope with headroom
  return e1 <= c * dt;
}

double gauss_hermite_m_norm(const SpdMatrix& m) {
  // E |Z|_M for Z ~ N(0, I_2) via a dense tensor Gauss grid (diagonalize M,
  // the law is rotation invariant)
  SymEig e = sym_eig(m.mat());
  const double a = e.values(0), b = e.values(1);
  const int grid = 400;
  double total = 0.0, weight = 0.0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double x = -6.0 + 12.0 * (i + 0.5) / grid;
      const double y = -6.0 + 12.0 * (j + 0.5) / grid;
      const double w = std::exp(-0.5 * (x * x + y * y));
      total += w * std::sqrt(a * x * x + b * y * y);
      weight += w;
    }
  return total / weight;
}

}  // namespace

int main() {
  Gate gate;

  // ------------------------------------------------------------------
  gate.run(1, "classical certificate (1, 4, 4): rho = 1/12, explicit M, global check", [] {
    ContractionCertificate cert = langevin_metric_simple(HessianBounds(1, 4), 4.0, 1);
    Matrix expected(2, 2);
    expected << 1, 0.25, 0.25, 0.25;
    if (!approx(cert.rho, 1.0 / 12, 1e-15)) return false;
    if ((cert.m.mat() - expected).cwiseAbs().maxCoeff() > 1e-15) return false;

    Potential u = cosine_modulated_potential(HessianBounds(1, 4), 1);
    DriftModel model = langevin_drift(u, 4.0);
    ContRReport rep = check_cont_r(model, cert, gaussian_states(1000, 2, 1, 3.0));
    return rep.endpoints_checked && rep.max_violation <= 1e-8;
  });

  // ------------------------------------------------------------------
  gate.run(2, "sharpness at (1, 25, 2): infeasible, confirmed on a 200x200 (a, c) grid", [] {
    HessianBounds bounds(1, 25);
    if (sharp_condition(bounds, 2.0)) return false;
    if (lemma_feasible_ac(bounds, 2.0).has_value()) return false;

    // brute force: no M = [[1, c], [c, a]] makes both endpoint matrices PD
    const double gamma = 2.0;
    auto endpoint_pd = [&](double a, double c, double xi) {
      Matrix m(2, 2), n1(2, 2);
      m << 1, c, c, a;
      n1 << 0, -1, xi, gamma;
      return sym_eig(m * n1).values.minCoeff() > 0;
    };
    for (int i = 1; i <= 200; ++i) {
      const double c = 10.0 * i / 200;  // c in (0, 10]
      for (int j = 1; j <= 200; ++j) {
        // a sweeps (c^2, c^2 + 40]: the PD-in-M region at this c
        const double a = c * c + 40.0 * j / 200;
        if (endpoint_pd(a, c, 1.0) && endpoint_pd(a, c, 25.0)) return false;
      }
    }
    return true;
  });

  // ------------------------------------------------------------------
  gate.run(3, "feasible lemma search (1, 4, 2): (a, c) = (2/7, 2/7), PD endpoints, rate > 0", [] {
    auto ac = lemma_feasible_ac(HessianBounds(1, 4), 2.0);
    if (!ac) return false;
    if (!approx(ac->first, 2.0 / 7, 1e-12) || !approx(ac->second, 2.0 / 7, 1e-12)) return false;
    Matrix m(2, 2);
    m << 1, ac->second, ac->second, ac->first;
    for (double xi : {1.0, 4.0}) {
      Matrix n1(2, 2);
      n1 << 0, -1, xi, 2.0;
      if (!(sym_eig(m * n1).values.minCoeff() > 0)) return false;
    }
    return best_rate(SpdMatrix(m), HessianBounds(1, 4), 2.0) > 0;
  });

  // ------------------------------------------------------------------
  gate.run(4, "almost-sure coupling contraction, cosine model, 100 replicas, dt calibration", [] {
    Potential u = cosine_modulated_potential(HessianBounds(1, 4), 1);
    DriftModel model = langevin_drift(u, 4.0);
    ContractionCertificate cert = langevin_metric_simple(HessianBounds(1, 4), 4.0, 1);
    return coupling_criterion(model, cert, 1e-3, 5.0, 100, 2024);
  });

  // ------------------------------------------------------------------
  gate.run(5, "PDMP moment decay rates within 5% (including rho_2 = 1.75)", [] {
    const double a = 1.0, h = 0.5, lam = 2.0;
    const Vector z0 = Vector::Constant(1, 1.0);
    const int replicas = 10000;
    for (int order : {1, 2, 3}) {
      const double rho = pdmp_moment_rate(order, a, h, lam);
      if (order == 2 && !approx(rho, 1.75, 1e-15)) return false;
      const double horizon = 3.0 / rho;
      const int grid = 16;
      std::vector<double> sums(grid + 1, 0.0);
      for (int r = 0; r < replicas; ++r) {
        PdmpTrajectory traj = pdmp_simulate(a, h, lam, z0, horizon, 5, std::uint64_t(r));
        for (int g = 0; g <= grid; ++g)
          sums[g] += std::pow(std::abs(traj.state_at(horizon * g / grid)(0)), double(order));
      }
      std::vector<std::pair<double, double>> series;
      for (int g = 0; g <= grid; ++g)
        series.push_back({horizon * g / grid, sums[g] / replicas});
      const double fitted = decay_fit(series).rate / order;
      if (std::abs(fitted - rho) / rho > 0.05) return false;
    }
    return true;
  });

  // ------------------------------------------------------------------
  gate.run(6, "order-3 pipeline: E = 1, Lyapunov oracle, certified coupling at 1.1 gamma0", [] {
    Matrix b(2, 2);
    b << 0, -1, 1, 1;
    SchurReduction sr = schur_reduction(b, 1);
    if (!approx(sr.e.mat()(0, 0), 1.0, 1e-14)) return false;

    LyapunovMetric lm = lyapunov_metric(b);
    Matrix n_expected(2, 2);
    n_expected << 1.5, 0.5, 0.5, 1.0;
    if ((lm.n.mat() - n_expected).cwiseAbs().maxCoeff() > 1e-10) return false;
    if (!approx(lm.kappa, 1.0 / (2.5 + std::sqrt(1.25)), 1e-10)) return false;

    HessianBounds bounds(1, 4);
    HConstants h = glangevin_h_constants(lm.n, sr.e, sr.d, 1, 2);
    const double gamma = 1.1 * glangevin_gamma0(h, lm.kappa, bounds.Lambda);
    ContractionCertificate cert = glangevin_certificate(b, bounds, gamma, 1, 2);

    Potential u = cosine_modulated_potential(bounds, 1);
    DriftModel model = glangevin_drift(u, b, gamma, 2);
    ContRReport rep = check_cont_r(model, cert, gaussian_states(1000, 3, 3, 3.0));
    if (!(rep.endpoints_checked && rep.max_violation <= 1e-8)) return false;

    return coupling_criterion(model, cert, 1e-3, 5.0, 40, 2025);
  });

  // ------------------------------------------------------------------
  gate.run(7, "classical reduction (p = n, B = I): gamma0 = 2 sqrt(Lambda), exact rho", [] {
    HessianBounds bounds(1, 4);
    for (double gamma : {4.0, 6.0, 11.0}) {
      ContractionCertificate cert =
          glangevin_certificate(Matrix::Identity(1, 1), bounds, gamma, 1, 1);
      if (!cert.gamma0 || std::abs(*cert.gamma0 - 4.0) > 4e-15) return false;
      if (std::abs(cert.rho - std::min(1.0 / (3 * gamma), gamma / 6)) > 1e-15) return false;
    }
    return true;
  });

  // ------------------------------------------------------------------
  gate.run(8, "unpinned chain N = 8: projected spectrum, rho = kappa/(3 gamma 64), coupling", [] {
    const int ncount = 8;
    Potential f = quadratic_potential(SpdMatrix::identity(1));
    Potential chain = chain_potential(std::nullopt, f, ncount);
    Matrix q = unpinned_projection(ncount, 1);
    Potential proj = projected_potential(chain, q);
    HessianBounds bounds = chain_bounds_unpinned(f, ncount);
    proj.declared_bounds = bounds;

    SymEig spec = sym_eig(proj.hess(Vector::Zero(ncount - 1)));
    const double min_eig = spec.values.minCoeff();
    if (!(min_eig >= 1.0 / 64)) return false;
    if (!approx(min_eig, 2.0 * (1.0 - std::cos(M_PI / 8)), 1e-10)) return false;

    const double gamma = 4.0;  // 2 sqrt(Lambda) with Lambda = 4 |F''| = 4
    ContractionCertificate cert = langevin_metric_simple(bounds, gamma, ncount - 1);
    if (!approx(cert.rho, 1.0 / (3.0 * gamma * 64.0), 1e-15)) return false;

    DriftModel model = langevin_drift(proj, gamma);
    ContRReport rep = check_cont_r(model, cert, gaussian_states(200, 2 * (ncount - 1), 8, 2.0));
    if (!(rep.endpoints_checked && rep.max_violation <= 1e-8)) return false;
    return coupling_criterion(model, cert, 1e-3, 5.0, 30, 2026);
  });

  // ------------------------------------------------------------------
  gate.run(9, "Wasserstein layer: brute force n = 5, order monotonicity, Gaussian W2 oracle", [] {
    SpdMatrix eye = SpdMatrix::identity(2);
    NoiseStream stream(77, 0, 2);

    // exact assignment vs all 120 permutations
    for (int trial = 0; trial < 20; ++trial) {
      EmpiricalMeasure mu, nu;
      for (int i = 0; i < 5; ++i) {
        mu.points.push_back(stream.gaussians(std::uint64_t(100 * trial + i), 2));
        nu.points.push_back(stream.gaussians(std::uint64_t(100 * trial + i), 2, 32));
      }
      std::vector<int> perm{0, 1, 2, 3, 4};
      double b1 = 1e300, b2 = 1e300, bi = 1e300;
      do {
        double s1 = 0, s2 = 0, si = 0;
        for (int i = 0; i < 5; ++i) {
          const double d = (mu.points[i] - nu.points[perm[i]]).norm();
          s1 += d / 5;
          s2 += d * d / 5;
          si = std::max(si, d);
        }
        b1 = std::min(b1, s1);
        b2 = std::min(b2, std::sqrt(s2));
        bi = std::min(bi, si);
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (!approx(empirical_wp(mu, nu, WassersteinOrder::W1, eye), b1, 1e-12)) return false;
      if (!approx(empirical_wp(mu, nu, WassersteinOrder::W2, eye), b2, 1e-12)) return false;
      if (!approx(empirical_wp(mu, nu, WassersteinOrder::WInf, eye), bi, 1e-12)) return false;
    }

    // monotonicity on 100 random pairs
    for (int trial = 0; trial < 100; ++trial) {
      EmpiricalMeasure mu, nu;
      for (int i = 0; i < 10; ++i) {
        mu.points.push_back(stream.gaussians(std::uint64_t(10000 + 100 * trial + i), 2));
        nu.points.push_back(stream.gaussians(std::uint64_t(10000 + 100 * trial + i), 2, 32));
      }
      const double w1 = empirical_wp(mu, nu, WassersteinOrder::W1, eye);
      const double w2 = empirical_wp(mu, nu, WassersteinOrder::W2, eye);
      const double wi = empirical_wp(mu, nu, WassersteinOrder::WInf, eye);
      if (w1 > w2 + 1e-12 || w2 > wi + 1e-12) return false;
    }

    // empirical contraction test on the quadratic model; at t = 0 the clouds
    // are N(0, I) vs N(shift, I) samples, whose exact W2 is |shift|_M
    HessianBounds bounds(1, 1);
    Potential u = quadratic_potential(SpdMatrix::identity(1));
    DriftModel model = langevin_drift(u, 2.0);
    ContractionCertificate cert = langevin_metric_simple(bounds, 2.0, 1);
    Vector shift = Vector::Constant(2, 5.0);
    EmpiricalMeasure a, b;
    const int samples = 64;
    for (int i = 0; i < samples; ++i) {
      a.points.push_back(stream.gaussians(std::uint64_t(50000 + i), 2));
      b.points.push_back(stream.gaussians(std::uint64_t(50000 + i), 2, 32) + shift);
    }
    IntegratorConfig cfg;
    cfg.dt = 5e-3;
    cfg.seed = 99;
    ContractionTestReport rep =
        wasserstein_contraction_test(model, cert, a, b, {0.0, 0.5, 1.0}, cfg);
    if (!rep.passed) return false;
    const double oracle = cert.m.norm(shift);
    // sampling noise of the empirical W2 is O(n^{-1/4}); 15% is generous here
    return std::abs(rep.w_init - oracle) / oracle < 0.15;
  });

  // ------------------------------------------------------------------
  gate.run(10, "order-3 fluctuation-dissipation: stationary covariance diag(1,1,1)", [] {
    Matrix b(2, 2);
    b << 0, -1, 1, 1;
    Potential u = quadratic_potential(SpdMatrix::identity(1));
    LyapunovMetric lm = lyapunov_metric(b);
    SchurReduction sr = schur_reduction(b, 1);
    HConstants h = glangevin_h_constants(lm.n, sr.e, sr.d, 1, 2);
    const double gamma = 1.1 * glangevin_gamma0(h, lm.kappa, 1.0);
    DriftModel model = glangevin_drift(u, b, gamma, 2);

    IntegratorConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 0.02 * 4e6;  // 4e6 steps, thinned by 4: 1e6 retained samples
    cfg.scheme = Scheme::Splitting;
    cfg.seed = 31;
    cfg.thinning = 4;
    Trajectory traj = simulate(model, Vector::Zero(3), cfg);

    const std::size_t burn = traj.states.size() / 20;
    const std::size_t kept = traj.states.size() - burn;
    Vector mean = Vector::Zero(3), second = Vector::Zero(3);
    for (std::size_t k = burn; k < traj.states.size(); ++k) {
      mean += traj.states[k];
      second += traj.states[k].cwiseProduct(traj.states[k]);
    }
    mean /= double(kept);
    second /= double(kept);

    // effective sample size from an integrated autocorrelation time of order
    // 1/rho over the thinned step; 3 standard errors of the variance estimate
    const double rho = std::min(1.0 / (3 * h.h3 * gamma), gamma * lm.kappa / 6);
    const double tau = 1.0 / (rho * cfg.dt * cfg.thinning);
    const double ess = double(kept) / (2.0 * tau);
    const double se = std::sqrt(2.0 / ess);  // var of a chi^2-based variance estimate
    for (int i = 0; i < 3; ++i) {
      const double var = second(i) - mean(i) * mean(i);
      if (std::abs(var - 1.0) > 3.0 * se + 0.01) return false;  // + O(dt^2) scheme bias
    }
    return true;
  });

  // ------------------------------------------------------------------
  gate.run(11, "concentration at T = 50, 2000 replicas, plus the ergodic bias bound", [] {
    HessianBounds bounds(1, 1);
    Potential u = quadratic_potential(SpdMatrix::identity(1));
    DriftModel model = langevin_drift(u, 2.0);
    ContractionCertificate cert = langevin_metric_simple(bounds, 2.0, 1);

    AffineObservable f{Vector::Zero(2), 0.0};
    f.w(0) = 1.0;
    f.w /= f.lipschitz(cert.m);

    IntegratorConfig cfg;
    cfg.dt = 0.02;
    cfg.seed = 17;
    ConcentrationReport rep = ergodic_concentration_check(
        model, cert, f, 50.0, {0.25, 0.5, 0.75, 1.0, 1.5, 2.0}, 2000, cfg);
    if (!rep.passed) return false;

    // bias: invariant law is N(0, I_2) and f is centered affine, so
    // mu_inf(f) = 0; W_{M,1}(delta_0, mu_inf) = E |Z|_M computed numerically
    const double w1 = gauss_hermite_m_norm(cert.m);
    const double bias = bias_bound(50.0, cert.rho, w1);
    return std::abs(rep.mean_ergodic_average - 0.0) <= bias;
  });

  // ------------------------------------------------------------------
  gate.run(12, "formula plumbing: log-Sobolev limits and the sqrt(3) L2 prefactor", [] {
    SpdMatrix m = SpdMatrix::identity(2);
    Matrix sigma = 2.0 * Matrix::Identity(2, 2);
    const double rho = 0.4;
    if (log_sobolev_constant(sigma, m, rho, 0.0) != 0.0) return false;
    const double limit = 4.0 / rho;  // |Sigma M^{1/2}|^2 / rho
    if (!approx(log_sobolev_constant(sigma, m, rho, 1e8), limit, 1e-12 * limit)) return false;
    return approx(l2_decay_bound(SpdMatrix::identity(4), 1.0, 0.0), std::sqrt(3.0), 1e-12);
  });

  if (gate.failures) {
    std::printf("%d of 12 criteria FAILED\n", gate.failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
