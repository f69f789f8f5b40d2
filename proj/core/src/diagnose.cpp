#include "ctkit/diagnose.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace ctkit {

namespace {

// Jonker-Volgenant style shortest augmenting path assignment; returns the
// minimal total cost and fills match[row] = column.
double solve_assignment(const Matrix& cost, std::vector<int>& match) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, n), way(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    p[n] = i;
    int j0 = n;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != n);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != n);
  }
  match.assign(n, -1);
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    if (p[j] < n) {
      match[p[j]] = j;
      total += cost(p[j], j);
    }
  }
  return total;
}

// Kuhn's augmenting-path matching restricted to edges with cost <= threshold.
bool feasible_matching(const Matrix& cost, double threshold) {
  const int n = static_cast<int>(cost.rows());
  std::vector<int> match_col(n, -1);
  std::vector<char> seen;
  std::function<bool(int)> try_row = [&](int i) -> bool {
    for (int j = 0; j < n; ++j) {
      if (cost(i, j) <= threshold && !seen[j]) {
        seen[j] = true;
        if (match_col[j] < 0 || try_row(match_col[j])) {
          match_col[j] = i;
          return true;
        }
      }
    }
    return false;
  };
  for (int i = 0; i < n; ++i) {
    seen.assign(n, false);
    if (!try_row(i)) return false;
  }
  return true;
}

double bottleneck_assignment(const Matrix& cost) {
  std::vector<double> values(cost.data(), cost.data() + cost.size());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::size_t lo = 0, hi = values.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (feasible_matching(cost, values[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return values[lo];
}

Matrix pairwise_m_distances(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                            const SpdMatrix& metric) {
  const int n = static_cast<int>(mu.size());
  Matrix d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d(i, j) = metric.norm(mu.points[i] - nu.points[j]);
  return d;
}

}  // namespace

double empirical_wp(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                    WassersteinOrder order, const SpdMatrix& metric) {
  if (mu.size() != nu.size() || mu.empty() || mu.size() > 4096)
    throw InvalidInput("empirical_wp: clouds must be equal-size, nonempty, <= 4096 points");
  for (const auto& z : mu.points)
    if (z.size() != metric.dim()) throw InvalidInput("empirical_wp: dimension mismatch");

  Matrix d = pairwise_m_distances(mu, nu, metric);
  const double n = double(mu.size());
  std::vector<int> match;
  switch (order) {
    case WassersteinOrder::W1:
      return solve_assignment(d, match) / n;
    case WassersteinOrder::W2: {
      Matrix d2 = d.array().square();
      return std::sqrt(solve_assignment(d2, match) / n);
    }
    case WassersteinOrder::WInf:
      return bottleneck_assignment(d);
  }
  throw InvalidInput("empirical_wp: unknown order");
}

namespace {

double bootstrap_margin(const EmpiricalMeasure& a, const EmpiricalMeasure& b,
                        WassersteinOrder order, const SpdMatrix& metric, double point_estimate,
                        std::uint64_t seed) {
  const int resamples = 200;
  const int n = static_cast<int>(a.size());
  NoiseStream stream(seed, 0, 4);
  double sum = 0.0, sum2 = 0.0;
  for (int r = 0; r < resamples; ++r) {
    EmpiricalMeasure ra, rb;
    ra.points.reserve(n);
    rb.points.reserve(n);
    for (int i = 0; i < n; ++i) {
      ra.points.push_back(a.points[std::min<int>(n - 1, int(stream.uniform(r, 2 * i) * n))]);
      rb.points.push_back(b.points[std::min<int>(n - 1, int(stream.uniform(r, 2 * i + 1) * n))]);
    }
    const double w = empirical_wp(ra, rb, order, metric);
    sum += w;
    sum2 += w * w;
  }
  const double mean = sum / resamples;
  const double var = std::max(0.0, sum2 / resamples - mean * mean);
  // one-sided margin: bootstrap spread plus bias of the resampled statistic
  return 3.0 * std::sqrt(var) + std::max(0.0, mean - point_estimate);
}

}  // namespace

ContractionTestReport wasserstein_contraction_test(const DriftModel& model,
                                                   const ContractionCertificate& cert,
                                                   const EmpiricalMeasure& init_a,
                                                   const EmpiricalMeasure& init_b,
                                                   const std::vector<double>& times,
                                                   const IntegratorConfig& cfg,
                                                   WassersteinOrder order) {
  if (init_a.size() != init_b.size() || init_a.empty())
    throw InvalidInput("wasserstein_contraction_test: clouds must be equal-size and nonempty");

  const int n = static_cast<int>(init_a.size());
  // Evolve every point independently; legs use distinct substreams so they are
  // independent (this is a law-level test, not a coupling test).
  auto evolve = [&](const EmpiricalMeasure& init, std::uint32_t substream, double t) {
    EmpiricalMeasure out;
    out.points.reserve(n);
    for (int i = 0; i < n; ++i) {
      IntegratorConfig c = cfg;
      c.t_end = t;
      c.seed = cfg.seed + substream;  // legs draw from disjoint streams
      c.replica_index = std::uint64_t(i);
      c.thinning = std::max<long>(1, c.steps());
      if (t == 0.0) {
        out.points.push_back(init.points[i]);
      } else {
        Trajectory traj = simulate(model, init.points[i], c);
        out.points.push_back(traj.states.back());
      }
    }
    return out;
  };

  ContractionTestReport report;
  report.w_init = empirical_wp(init_a, init_b, order, cert.m);
  report.passed = true;
  for (double t : times) {
    EmpiricalMeasure at = evolve(init_a, 1000, t);
    EmpiricalMeasure bt = evolve(init_b, 2000, t);
    const double w = empirical_wp(at, bt, order, cert.m);
    const double margin = bootstrap_margin(at, bt, order, cert.m, w, cfg.seed + 77);
    const double bound = std::exp(-cert.rho * t) * report.w_init + margin;
    const bool violated = w > bound;
    report.points.push_back({t, w, bound, bound - w, violated});
    if (violated) report.passed = false;
  }
  return report;
}

DecayFit decay_fit(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) throw InvalidInput("decay_fit: need at least 3 points");
  double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
  for (auto [t, v] : series) {
    if (!(v > 0)) throw InvalidInput("decay_fit: values must be positive");
    const double y = std::log(v);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    syy += y * y;
  }
  const double m = double(series.size());
  const double denom = m * stt - st * st;
  if (std::abs(denom) < 1e-14) throw InvalidInput("decay_fit: degenerate time grid");
  const double slope = (m * sty - st * sy) / denom;
  const double inter = (sy - slope * st) / m;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / m;
  for (auto [t, v] : series) {
    const double y = std::log(v);
    ss_res += (y - slope * t - inter) * (y - slope * t - inter);
    ss_tot += (y - ybar) * (y - ybar);
  }
  const double r2 = ss_tot < 1e-300 ? 1.0 : 1.0 - ss_res / ss_tot;
  return {-slope, std::exp(inter), r2};
}

ConcentrationReport ergodic_concentration_check(const DriftModel& model,
                                                const ContractionCertificate& cert,
                                                const AffineObservable& f, double t_horizon,
                                                const std::vector<double>& u_grid, int replicas,
                                                const IntegratorConfig& cfg) {
  if (!(cert.rho > 0))
    throw InvalidInput("ergodic_concentration_check: certificate must have rho > 0");
  const double lip = f.lipschitz(cert.m);
  if (std::abs(lip - 1.0) > 1e-8)
    throw InvalidInput("ergodic_concentration_check: observable must be normalized to "
                       "unit M^{-1} Lipschitz constant");

  const Vector z0 = Vector::Zero(model.dim);
  std::vector<double> averages(replicas);
  for (int r = 0; r < replicas; ++r) {
    IntegratorConfig c = cfg;
    c.t_end = t_horizon;
    c.replica_index = std::uint64_t(r);
    c.thinning = 1;
    Trajectory traj = simulate(model, z0, c);
    double acc = 0.0;
    for (std::size_t k = 1; k < traj.states.size(); ++k)
      acc += f(traj.states[k]);
    averages[r] = acc / double(traj.states.size() - 1);
  }
  const double mean = std::accumulate(averages.begin(), averages.end(), 0.0) / replicas;

  // Dirac initial law: C' = 0 in the continuous-time bound.
  const double smn = sigma_m_norm(model.sigma, cert.m);

  ConcentrationReport report;
  report.mean_ergodic_average = mean;
  report.passed = true;
  for (double u : u_grid) {
    int count = 0;
    for (double a : averages)
      if (a - mean >= u) ++count;
    const double emp = double(count) / replicas;
    const double bound = concentration_bound(t_horizon, u, cert.rho, smn, 0.0);
    const double margin = 3.0 * std::sqrt(std::max(bound * (1 - bound), 1.0 / replicas) / replicas);
    const bool violated = emp > bound + margin;
    report.points.push_back({u, emp, bound, margin, violated});
    if (violated) report.passed = false;
  }
  return report;
}

}  // namespace ctkit
