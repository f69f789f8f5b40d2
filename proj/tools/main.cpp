// ctkit command-line driver: builds models and contraction certificates from a
// config file and runs the certify / simulate / diagnose pipelines.
//
// Exit codes: 0 success, 2 config error, 3 certificate infeasible,
// 4 simulation divergence, 5 diagnostic failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "ctkit/certify.hpp"
#include "ctkit/diagnose.hpp"
#include "ctkit/models.hpp"
#include "ctkit/rng.hpp"
#include "ctkit/simulate.hpp"
#include "report.hpp"

namespace ctkit::cli {
namespace {

constexpr const char* kVersion = "ctkit 0.1.0";

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;
  std::optional<long> seed_override;
};

// ---------------------------------------------------------------------------
// shared config schema

const std::vector<std::string> kModelKeys = {
    "model.family",  "model.potential", "model.lambda",       "model.Lambda",
    "model.gamma",   "model.n",         "model.K",            "model.p",
    "model.b",       "model.Ncount",    "model.kappa",        "model.temperatures",
    "model.a",       "model.h",         "model.jump_rate",
};

const std::vector<std::string> kCertificateKeys = {
    "certificate.construction",
    "certificate.tolerance",
    "certificate.check_points",
};

const std::vector<std::string> kSimulationKeys = {
    "simulation.dt",      "simulation.t_end",    "simulation.replicas",
    "simulation.seed",    "simulation.thinning", "simulation.scheme",
};

const std::vector<std::string> kDiagnosticsKeys = {
    "diagnostics.times",     "diagnostics.order",    "diagnostics.samples",
    "diagnostics.offset",    "diagnostics.u_grid",   "diagnostics.monitor_c",
    "diagnostics.horizon",   "diagnostics.rate_tol", "diagnostics.moments",
    "diagnostics.observable",
};

std::vector<std::string> allowed_keys() {
  std::vector<std::string> keys = kModelKeys;
  keys.insert(keys.end(), kCertificateKeys.begin(), kCertificateKeys.end());
  keys.insert(keys.end(), kSimulationKeys.begin(), kSimulationKeys.end());
  keys.insert(keys.end(), kDiagnosticsKeys.begin(), kDiagnosticsKeys.end());
  return keys;
}

Config load_config(const Options& opt) {
  Config cfg = Config::parse_file(opt.config_path);
  cfg.restrict_keys(allowed_keys());
  if (opt.seed_override) cfg.set("simulation", "seed", std::to_string(*opt.seed_override));
  return cfg;
}

std::string out_path(const Options& opt, const std::string& name) {
  std::filesystem::create_directories(opt.out_dir);
  return (std::filesystem::path(opt.out_dir) / name).string();
}

// ---------------------------------------------------------------------------
// model construction

struct BuiltModel {
  DriftModel model;
  HessianBounds bounds;
  std::string family;
  int n = 0;  // position block dimension
  int p = 0;  // velocity / auxiliary block dimension
  Matrix b;   // friction block (p x p)
  double gamma = 0;
};

Potential make_scalar_potential(const Config& cfg, const HessianBounds& bounds, int dim) {
  const std::string kind = cfg.get_string("model", "potential", std::string("cosine"));
  if (kind == "cosine") return cosine_modulated_potential(bounds, dim);
  if (kind == "quadratic") {
    // quadratic with the curvature fixed at Lambda (lambda must equal Lambda)
    if (std::abs(bounds.lambda - bounds.Lambda) > 1e-14)
      throw ConfigError("model.potential = quadratic requires lambda = Lambda");
    return quadratic_potential(SpdMatrix(bounds.Lambda * Matrix::Identity(dim, dim)));
  }
  throw ConfigError("unknown model.potential '" + kind + "'");
}

Potential quadratic_interaction(double kappa, int dim) {
  return quadratic_potential(SpdMatrix(kappa * Matrix::Identity(dim, dim)));
}

BuiltModel build_model(const Config& cfg) {
  const std::string family = cfg.get_string("model", "family");
  const double gamma = cfg.get_double("model", "gamma");
  const int n = static_cast<int>(cfg.get_long("model", "n", 1));

  if (family == "langevin") {
    HessianBounds bounds(cfg.get_double("model", "lambda"), cfg.get_double("model", "Lambda"));
    Potential u = make_scalar_potential(cfg, bounds, n);
    std::optional<Vector> temps;
    if (cfg.has("model", "temperatures")) {
      auto list = cfg.get_doubles("model", "temperatures");
      temps = Eigen::Map<const Vector>(list.data(), static_cast<Eigen::Index>(list.size()));
    }
    return {langevin_drift(u, gamma, temps), bounds, family, n, n,
            Matrix::Identity(n, n), gamma};
  }

  if (family == "order_k" || family == "glangevin") {
    HessianBounds bounds(cfg.get_double("model", "lambda"), cfg.get_double("model", "Lambda"));
    Potential u = make_scalar_potential(cfg, bounds, n);
    Matrix b;
    int p;
    if (family == "order_k") {
      const int k = static_cast<int>(cfg.get_long("model", "K", 1));
      OrderKSystem sys = order_k_system(k, n);
      b = sys.b;
      p = k * n;
    } else {
      p = static_cast<int>(cfg.get_long("model", "p"));
      auto entries = cfg.get_doubles("model", "b");
      if (static_cast<int>(entries.size()) != p * p)
        throw ConfigError("model.b must list p*p entries row-major");
      b = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                         Eigen::RowMajor>>(entries.data(), p, p);
    }
    return {glangevin_drift(u, b, gamma, p), bounds, family, n, p, b, gamma};
  }

  if (family == "chain_pinned" || family == "chain_unpinned") {
    const int ncount = static_cast<int>(cfg.get_long("model", "Ncount"));
    const double kappa = cfg.get_double("model", "kappa", 1.0);
    Potential f = quadratic_interaction(kappa, 1);
    if (family == "chain_pinned") {
      HessianBounds vb(cfg.get_double("model", "lambda"), cfg.get_double("model", "Lambda"));
      Potential v = make_scalar_potential(cfg, vb, 1);
      Potential chain = chain_potential(v, f, ncount);
      HessianBounds bounds = chain_bounds_pinned(v, f, 0.0);
      chain.declared_bounds = bounds;
      return {langevin_drift(chain, gamma), bounds, family, ncount, ncount,
              Matrix::Identity(ncount, ncount), gamma};
    }
    Potential chain = chain_potential(std::nullopt, f, ncount);
    Matrix q = unpinned_projection(ncount, 1);
    Potential proj = projected_potential(chain, q);
    HessianBounds bounds = chain_bounds_unpinned(f, ncount);
    proj.declared_bounds = bounds;
    const int dim = ncount - 1;
    return {langevin_drift(proj, gamma), bounds, family, dim, dim,
            Matrix::Identity(dim, dim), gamma};
  }

  throw ConfigError("unknown model.family '" + family + "'");
}

ContractionCertificate build_certificate(const Config& cfg, const BuiltModel& built) {
  std::string construction = cfg.get_string("certificate", "construction", std::string("auto"));
  if (construction == "auto")
    construction = (built.family == "order_k" || built.family == "glangevin") ? "generalized"
                                                                              : "simple";
  if (construction == "simple")
    return langevin_metric_simple(built.bounds, built.gamma, built.n);
  if (construction == "generalized")
    return glangevin_certificate(built.b, built.bounds, built.gamma, built.n, built.p);
  if (construction == "lemma") {
    auto ac = lemma_feasible_ac(built.bounds, built.gamma);
    if (!ac)
      throw FrictionTooLow(2.0 * std::sqrt(built.bounds.Lambda),
                           "no Euclidean 2x2 certificate exists for these bounds");
    Matrix m(2, 2);
    m << 1, ac->second, ac->second, ac->first;
    SpdMatrix mspd(m);
    return {mspd, best_rate(mspd, built.bounds, built.gamma), std::nullopt,
            Provenance::LemmaSearch};
  }
  throw ConfigError("unknown certificate.construction '" + construction + "'");
}

IntegratorConfig build_integrator(const Config& cfg) {
  IntegratorConfig ic;
  ic.dt = cfg.get_double("simulation", "dt", 1e-3);
  ic.t_end = cfg.get_double("simulation", "t_end", 1.0);
  ic.seed = static_cast<std::uint64_t>(cfg.get_long("simulation", "seed", 0));
  ic.thinning = cfg.get_long("simulation", "thinning", 1);
  const std::string scheme = cfg.get_string("simulation", "scheme", std::string("euler"));
  if (scheme == "euler")
    ic.scheme = Scheme::Euler;
  else if (scheme == "splitting")
    ic.scheme = Scheme::Splitting;
  else
    throw ConfigError("unknown simulation.scheme '" + scheme + "'");
  return ic;
}

std::vector<Vector> sample_states(int count, int dim, std::uint64_t seed, double spread) {
  NoiseStream stream(seed, 0, 7);
  std::vector<Vector> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(spread * stream.gaussians(std::uint64_t(i), dim));
  return out;
}

void parallel_for(int threads, long count, const std::function<void(long)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

void add_certificate_block(KeyValueReport& report, const ContractionCertificate& cert) {
  report.add("certificate.provenance", std::string(provenance_name(cert.provenance)));
  report.add("certificate.rho", cert.rho);
  if (cert.gamma0) report.add("certificate.gamma0", *cert.gamma0);
  report.add_matrix("certificate.M", cert.m.mat());
}

// ---------------------------------------------------------------------------
// commands

int cmd_certify(const Options& opt, bool chain_mode) {
  Config cfg = load_config(opt);
  BuiltModel built = build_model(cfg);
  if (chain_mode && built.family.rfind("chain", 0) != 0)
    throw ConfigError("the chain command requires model.family = chain_pinned or chain_unpinned");
  ContractionCertificate cert = build_certificate(cfg, built);
  IntegratorConfig ic = build_integrator(cfg);

  const int check_points = static_cast<int>(cfg.get_long("certificate", "check_points", 1000));
  const double tol = cfg.get_double("certificate", "tolerance", 1e-8);
  std::vector<Vector> points = sample_states(check_points, built.model.dim, ic.seed, 3.0);
  ContRReport check = check_cont_r(built.model, cert, points);

  KeyValueReport report;
  report.add("version", std::string(kVersion));
  report.add("model.family", built.family);
  report.add("model.dim", long(built.model.dim));
  report.add("bounds.lambda", built.bounds.lambda);
  report.add("bounds.Lambda", built.bounds.Lambda);
  add_certificate_block(report, cert);

  if (built.family == "order_k" || built.family == "glangevin") {
    LyapunovMetric lm = lyapunov_metric(built.b);
    SchurReduction sr = schur_reduction(built.b, built.n);
    HConstants h = glangevin_h_constants(lm.n, sr.e, sr.d, built.n, built.p);
    report.add_matrix("lyapunov.N", lm.n.mat());
    report.add("lyapunov.kappa", lm.kappa);
    report.add_matrix("schur.E", sr.e.mat());
    report.add("h.h1", h.h1);
    report.add("h.h2", h.h2);
    report.add("h.h3", h.h3);
    report.add("h.h4", h.h4);
    report.add("h.h5", h.h5);
  }
  if (chain_mode) {
    // smallest curvature of the (projected) potential at the origin
    const auto* ls = std::get_if<LangevinStructure>(&built.model.structure);
    Matrix hess = ls->potential.hess(Vector::Zero(built.n));
    report.add("chain.hessian_min_eigenvalue", sym_eig(hess).values.minCoeff());
  }

  auto times = cfg.get_doubles("diagnostics", "times", {0.5, 1.0, 2.0, 5.0});
  for (double t : times)
    report.add("log_sobolev.C_" + format_double(t),
               log_sobolev_constant(built.model.sigma, cert.m, cert.rho, t));

  report.add("check.max_violation", check.max_violation);
  report.add("check.endpoints_checked", long(check.endpoints_checked));
  report.add("check.points", long(check_points));
  report.add("check.passed", long(check.passed(tol)));
  report.add_config(cfg);
  report.write(out_path(opt, chain_mode ? "chain.txt" : "certify.txt"));

  if (!check.passed(tol)) {
    std::cerr << "contraction check failed: max_violation = " << check.max_violation << '\n';
    return 5;
  }
  return 0;
}

int cmd_couple(const Options& opt) {
  Config cfg = load_config(opt);
  BuiltModel built = build_model(cfg);
  ContractionCertificate cert = build_certificate(cfg, built);
  IntegratorConfig ic = build_integrator(cfg);
  const long replicas = cfg.get_long("simulation", "replicas", 10);
  const double monitor_c = cfg.get_double("diagnostics", "monitor_c", 10.0);

  std::vector<MonitorResult> results(replicas);
  std::vector<std::pair<long, long>> failures;  // (replica, step) divergences
  std::mutex mu;
  parallel_for(opt.threads, replicas, [&](long r) {
    IntegratorConfig c = ic;
    c.replica_index = std::uint64_t(r);
    NoiseStream init(ic.seed, std::uint64_t(r), 9);
    Vector a = 2.0 * init.gaussians(0, built.model.dim);
    Vector b = 2.0 * init.gaussians(1, built.model.dim);
    try {
      CoupledTrajectory traj = couple_sync(built.model, a, b, c, &cert.m);
      results[r] = contraction_monitor(traj, cert.rho);
    } catch (const Diverged& e) {
      std::lock_guard<std::mutex> lock(mu);
      failures.emplace_back(r, e.step);
    }
  });
  if (!failures.empty()) {
    std::cerr << "replica " << failures.front().first << " diverged at step "
              << failures.front().second << '\n';
    return 4;
  }

  CsvReport csv({"replica", "max_ratio", "argmax_time"});
  double worst = 0;
  for (long r = 0; r < replicas; ++r) {
    csv.add_row(std::vector<double>{double(r), results[r].max_ratio, results[r].argmax_time});
    worst = std::max(worst, results[r].max_ratio);
  }
  csv.write(out_path(opt, "couple.csv"));

  std::vector<double> sorted;
  for (const auto& r : results) sorted.push_back(r.max_ratio);
  std::sort(sorted.begin(), sorted.end());
  KeyValueReport report;
  report.add("version", std::string(kVersion));
  add_certificate_block(report, cert);
  report.add("monitor.replicas", replicas);
  report.add("monitor.threshold", 1.0 + monitor_c * ic.dt);
  report.add("monitor.max_ratio", worst);
  report.add("monitor.median_ratio", sorted[sorted.size() / 2]);
  report.add("monitor.q90_ratio", sorted[std::size_t(0.9 * double(sorted.size() - 1))]);
  const bool passed = worst <= 1.0 + monitor_c * ic.dt;
  report.add("monitor.passed", long(passed));
  report.add_config(cfg);
  report.write(out_path(opt, "couple.txt"));

  if (!passed) {
    std::cerr << "coupling monitor failed: max_ratio = " << worst << '\n';
    return 5;
  }
  return 0;
}

int cmd_simulate(const Options& opt) {
  Config cfg = load_config(opt);
  BuiltModel built = build_model(cfg);
  IntegratorConfig ic = build_integrator(cfg);

  Trajectory traj = simulate(built.model, Vector::Zero(built.model.dim), ic);
  std::vector<std::string> header{"t"};
  for (int i = 0; i < built.model.dim; ++i) header.push_back("z" + std::to_string(i));
  CsvReport csv(header);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    std::vector<double> row{traj.times[k]};
    for (int i = 0; i < built.model.dim; ++i) row.push_back(traj.states[k](i));
    csv.add_row(row);
  }
  csv.write(out_path(opt, "trajectory.csv"));

  KeyValueReport report;
  report.add("version", std::string(kVersion));
  report.add("simulate.steps", ic.steps());
  report.add("simulate.final_norm", traj.states.back().norm());
  report.add_config(cfg);
  report.write(out_path(opt, "simulate.txt"));
  return 0;
}

int cmd_pdmp(const Options& opt) {
  Config cfg = load_config(opt);
  cfg.get_string("model", "family") == "pdmp"
      ? void()
      : throw ConfigError("the pdmp command requires model.family = pdmp");
  const double a = cfg.get_double("model", "a");
  const double h = cfg.get_double("model", "h");
  const double lam = cfg.get_double("model", "jump_rate");
  IntegratorConfig ic = build_integrator(cfg);
  const long replicas = cfg.get_long("simulation", "replicas", 10000);
  const double rate_tol = cfg.get_double("diagnostics", "rate_tol", 0.05);
  auto moments = cfg.get_doubles("diagnostics", "moments", {1, 2, 3});

  const Vector z0 = Vector::Constant(1, 1.0);
  KeyValueReport report;
  report.add("version", std::string(kVersion));
  CsvReport csv({"moment", "t", "mean_abs_moment"});
  bool passed = true;

  for (double md : moments) {
    const int order = static_cast<int>(md);
    const double rho = pdmp_moment_rate(order, a, h, lam);
    const double horizon = 3.0 / rho;
    const int grid = 16;
    std::vector<double> sums(grid + 1, 0.0);
    std::vector<std::vector<double>> partial(std::max(opt.threads, 1),
                                             std::vector<double>(grid + 1, 0.0));
    parallel_for(opt.threads, replicas, [&](long r) {
      PdmpTrajectory traj = pdmp_simulate(a, h, lam, z0, horizon, ic.seed, std::uint64_t(r));
      auto& acc = partial[r % std::max(opt.threads, 1)];
      for (int g = 0; g <= grid; ++g) {
        const double t = horizon * g / grid;
        acc[g] += std::pow(std::abs(traj.state_at(t)(0)), double(order));
      }
    });
    for (const auto& acc : partial)
      for (int g = 0; g <= grid; ++g) sums[g] += acc[g];

    std::vector<std::pair<double, double>> series;
    for (int g = 0; g <= grid; ++g) {
      const double t = horizon * g / grid;
      const double mean = sums[g] / double(replicas);
      series.push_back({t, mean});
      csv.add_row(std::vector<double>{double(order), t, mean});
    }
    DecayFit fit = decay_fit(series);
    const double fitted_rate = fit.rate / double(order);
    const double rel_err = std::abs(fitted_rate - rho) / rho;
    report.add("pdmp.rho_" + std::to_string(order) + ".exact", rho);
    report.add("pdmp.rho_" + std::to_string(order) + ".fitted", fitted_rate);
    report.add("pdmp.rho_" + std::to_string(order) + ".rel_error", rel_err);
    if (rel_err > rate_tol) passed = false;
  }

  csv.write(out_path(opt, "pdmp.csv"));
  report.add("pdmp.replicas", replicas);
  report.add("pdmp.passed", long(passed));
  report.add_config(cfg);
  report.write(out_path(opt, "pdmp.txt"));
  if (!passed) {
    std::cerr << "pdmp rate fit outside tolerance\n";
    return 5;
  }
  return 0;
}

int cmd_wasserstein(const Options& opt) {
  Config cfg = load_config(opt);
  BuiltModel built = build_model(cfg);
  ContractionCertificate cert = build_certificate(cfg, built);
  IntegratorConfig ic = build_integrator(cfg);
  const int samples = static_cast<int>(cfg.get_long("diagnostics", "samples", 32));
  const double offset = cfg.get_double("diagnostics", "offset", 4.0);
  auto times = cfg.get_doubles("diagnostics", "times", {0.0, 0.5, 1.0, 2.0});
  const std::string order_key = cfg.get_string("diagnostics", "order", std::string("2"));
  WassersteinOrder order;
  if (order_key == "1")
    order = WassersteinOrder::W1;
  else if (order_key == "2")
    order = WassersteinOrder::W2;
  else if (order_key == "inf")
    order = WassersteinOrder::WInf;
  else
    throw ConfigError("diagnostics.order must be 1, 2 or inf");

  NoiseStream init(ic.seed, 0, 11);
  EmpiricalMeasure a, b;
  for (int i = 0; i < samples; ++i) {
    a.points.push_back(init.gaussians(std::uint64_t(i), built.model.dim));
    b.points.push_back(init.gaussians(std::uint64_t(i), built.model.dim, 64) +
                       Vector::Constant(built.model.dim, offset));
  }

  ContractionTestReport rep = wasserstein_contraction_test(built.model, cert, a, b, times, ic,
                                                           order);
  CsvReport csv({"t", "w_empirical", "bound", "slack", "violated"});
  for (const auto& pt : rep.points)
    csv.add_row(std::vector<double>{pt.t, pt.w_emp, pt.bound, pt.slack, double(pt.violated)});
  csv.write(out_path(opt, "wasserstein.csv"));

  KeyValueReport report;
  report.add("version", std::string(kVersion));
  add_certificate_block(report, cert);
  report.add("wasserstein.order", order_key);
  report.add("wasserstein.w_init", rep.w_init);
  report.add("wasserstein.passed", long(rep.passed));
  report.add_config(cfg);
  report.write(out_path(opt, "wasserstein.txt"));
  if (!rep.passed) {
    std::cerr << "empirical Wasserstein contraction violated\n";
    return 5;
  }
  return 0;
}

int cmd_concentration(const Options& opt) {
  Config cfg = load_config(opt);
  BuiltModel built = build_model(cfg);
  ContractionCertificate cert = build_certificate(cfg, built);
  IntegratorConfig ic = build_integrator(cfg);
  const double horizon = cfg.get_double("diagnostics", "horizon", ic.t_end);
  const int replicas = static_cast<int>(cfg.get_long("simulation", "replicas", 500));
  auto u_grid = cfg.get_doubles("diagnostics", "u_grid", {0.25, 0.5, 1.0});

  AffineObservable f{Vector::Zero(built.model.dim), 0.0};
  auto w_entries = cfg.get_doubles("diagnostics", "observable", {});
  if (w_entries.empty())
    f.w(0) = 1.0;
  else {
    if (static_cast<int>(w_entries.size()) != built.model.dim)
      throw ConfigError("diagnostics.observable must list model.dim entries");
    f.w = Eigen::Map<const Vector>(w_entries.data(),
                                   static_cast<Eigen::Index>(w_entries.size()));
  }
  f.w /= f.lipschitz(cert.m);  // normalize to unit dual-norm Lipschitz constant

  ConcentrationReport rep =
      ergodic_concentration_check(built.model, cert, f, horizon, u_grid, replicas, ic);
  CsvReport csv({"u", "empirical", "bound", "margin", "violated"});
  for (const auto& pt : rep.points)
    csv.add_row(std::vector<double>{pt.u, pt.empirical, pt.bound, pt.margin,
                                    double(pt.violated)});
  csv.write(out_path(opt, "concentration.csv"));

  KeyValueReport report;
  report.add("version", std::string(kVersion));
  add_certificate_block(report, cert);
  report.add("concentration.horizon", horizon);
  report.add("concentration.replicas", long(replicas));
  report.add("concentration.mean", rep.mean_ergodic_average);
  report.add("concentration.passed", long(rep.passed));
  report.add_config(cfg);
  report.write(out_path(opt, "concentration.txt"));
  if (!rep.passed) {
    std::cerr << "concentration bound violated\n";
    return 5;
  }
  return 0;
}

int run_guarded(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const FrictionTooLow& e) {
    std::cerr << "certificate infeasible: " << e.what() << " (required gamma0 = " << e.gamma0
              << ")\n";
    return 3;
  } catch (const NotStable& e) {
    std::cerr << "certificate infeasible: " << e.what() << '\n';
    return 3;
  } catch (const AssumptionViolated& e) {
    std::cerr << "certificate infeasible: " << e.what() << '\n';
    return 3;
  } catch (const FDViolation& e) {
    std::cerr << "certificate infeasible: " << e.what() << '\n';
    return 3;
  } catch (const Degenerate& e) {
    std::cerr << "certificate infeasible: " << e.what() << '\n';
    return 3;
  } catch (const Diverged& e) {
    std::cerr << "simulation diverged: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace
}  // namespace ctkit::cli

int main(int argc, char** argv) {
  using namespace ctkit::cli;

  CLI::App app{"contraction-certificate toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options opt;
  std::function<int()> selected;
  auto add = [&](const std::string& name, const std::string& desc,
                 std::function<int(const Options&)> fn) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("config", opt.config_path, "experiment configuration file")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--threads", opt.threads, "worker threads for replica loops");
    long seed = 0;
    sub->add_option("--seed", seed, "override the config seed")
        ->each([&opt, &seed](const std::string&) { opt.seed_override = seed; });
    sub->callback([&selected, fn, &opt] { selected = [fn, &opt] { return fn(opt); }; });
  };

  add("certify", "compute and verify a contraction certificate",
      [](const Options& o) { return cmd_certify(o, false); });
  add("couple", "monitor synchronous-coupling contraction over replicas", cmd_couple);
  add("simulate", "integrate one trajectory and write the time series", cmd_simulate);
  add("pdmp", "fit jump-process moment decay rates against the closed form", cmd_pdmp);
  add("chain", "certify an oscillator-chain model",
      [](const Options& o) { return cmd_certify(o, true); });
  add("wasserstein", "empirical Wasserstein contraction test", cmd_wasserstein);
  add("concentration", "ergodic-average concentration check", cmd_concentration);

  CLI11_PARSE(app, argc, argv);
  return run_guarded(selected);
}
