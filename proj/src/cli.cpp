#include "hawkeslob/cli.hpp"

#include "hawkeslob/io.hpp"
#include "hawkeslob/parallel.hpp"
#include "hawkeslob/stats.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>

namespace hawkeslob::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
  auto* c = cmd->add_option("--config", opts.config_path, "JSON config file");
  if (config_required) c->required();
  cmd->add_option("--out", opts.out_dir, "output directory (created if missing)");
  cmd->add_option("--seed", opts.seed, "RNG seed (default 0xC0FFEE)");
  cmd->add_option("--threads", opts.threads,
                  "worker threads (default: HAWKES_LOB_THREADS or hardware)");
}

int resolve_threads(const CommonOpts& opts) {
  return opts.threads >= 1 ? opts.threads : default_thread_count();
}

json resolved_block(const CommonOpts& opts, int threads) {
  return json{{"out", opts.out_dir}, {"seed", opts.seed}, {"threads", threads}};
}

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

Check check_leq(std::string name, double value, double threshold) {
  const bool ok = value <= threshold;
  return Check{std::move(name), value, threshold, ok};
}

Check check_flag(std::string name, bool ok) {
  return Check{std::move(name), ok ? 1.0 : 0.0, 1.0, ok};
}

json checks_to_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back(json{
        {"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  return arr;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

// writes summary.json; returns 0 when every check passes, 3 otherwise
int finish_summary(const fs::path& out_dir, json summary, const std::vector<Check>& checks) {
  const bool pass = all_pass(checks);
  summary["checks"] = checks_to_json(checks);
  summary["pass"] = pass;
  write_json_file(out_dir / "summary.json", summary);
  return pass ? 0 : 3;
}

double tolerance(const json& config, const char* name, double fallback) {
  if (!config.contains("tolerances")) return fallback;
  return config.at("tolerances").value(name, fallback);
}

// ---------------------------------------------------------------- simulate-*

int run_simulate_hawkes(const CommonOpts& opts, double horizon) {
  const json cfg = load_json_file(opts.config_path);
  const HawkesSpec spec = hawkes_spec_from_json(cfg);
  const EventLog log = simulate_hawkes(spec, horizon, opts.seed);
  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);
  write_event_log_csv(out / "events.csv", log);

  json summary{{"subcommand", "simulate-hawkes"},
               {"config", cfg},
               {"resolved", resolved_block(opts, 1)},
               {"horizon", horizon},
               {"metrics",
                json{{"events", log.size()},
                     {"mean_total_rate", static_cast<double>(log.size()) / horizon}}},
               {"outputs", json{{"events_csv", (out / "events.csv").string()}}}};
  return finish_summary(out, std::move(summary), {});
}

int run_simulate_micro(const CommonOpts& opts, double horizon) {
  const json cfg = load_json_file(opts.config_path);
  const MicroConfig config = micro_config_from_json(cfg);
  MicroDiagnostics diag;
  const MicroPath path = simulate_micro(config, horizon, opts.seed, &diag);
  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);
  write_micro_events_csv(out / "events.csv", path);
  const double snapshot_dt = cfg.value("snapshot_dt", path.horizon_micro / 100.0);
  write_micro_snapshots_csv(out / "snapshots_bid.csv", path, Side::bid, snapshot_dt);
  write_micro_snapshots_csv(out / "snapshots_ask.csv", path, Side::ask, snapshot_dt);

  json summary{{"subcommand", "simulate-micro"},
               {"config", cfg},
               {"resolved", resolved_block(opts, 1)},
               {"horizon", horizon},
               {"metrics",
                json{{"events", diag.events},
                     {"clamped_rates", diag.clamped},
                     {"max_total_rate", diag.max_total_rate}}},
               {"outputs",
                json{{"events_csv", (out / "events.csv").string()},
                     {"snapshots_bid_csv", (out / "snapshots_bid.csv").string()},
                     {"snapshots_ask_csv", (out / "snapshots_ask.csv").string()}}}};
  return finish_summary(out, std::move(summary), {});
}

int run_simulate_meso(const CommonOpts& opts, double horizon, int replicates,
                      std::optional<double> dt_override) {
  const json cfg = load_json_file(opts.config_path);
  MesoConfig config = meso_config_from_json(cfg);
  if (dt_override) {
    config.dt = *dt_override;
    config.validate();
  }
  const int threads = resolve_threads(opts);
  const int stride = cfg.value("output_stride", 1);
  const int dump_count = cfg.value("dump_paths", 0);

  std::vector<Matrix> dumps;
  const MesoEnsemble ensemble =
      simulate_meso(config, horizon, replicates, opts.seed, threads, stride,
                    dump_count > 0 ? &dumps : nullptr, dump_count);
  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);
  write_meso_moments_csv(out / "moments.csv", ensemble);
  for (std::size_t p = 0; p < dumps.size(); ++p)
    write_meso_path_csv(out / ("path_" + std::to_string(p) + ".csv"), ensemble.grid, dumps[p]);

  const Index levels = config.coeffs.levels();
  json terminal_mean = json::array(), terminal_var = json::array();
  for (Index k = 0; k < levels; ++k) {
    MomentAccumulator acc;
    for (Index p = 0; p < ensemble.terminal_x.rows(); ++p) acc.add(ensemble.terminal_x(p, k));
    terminal_mean.push_back(acc.mean());
    terminal_var.push_back(acc.variance());
  }
  json summary{{"subcommand", "simulate-meso"},
               {"config", cfg},
               {"resolved", resolved_block(opts, threads)},
               {"horizon", horizon},
               {"replicates", replicates},
               {"metrics",
                json{{"terminal_mean", terminal_mean},
                     {"terminal_var", terminal_var},
                     {"negativity_violations", ensemble.negativity_violations},
                     {"complementarity_violations", ensemble.complementarity_violations},
                     {"eta_decrease_violations", ensemble.eta_decrease_violations}}},
               {"outputs", json{{"moments_csv", (out / "moments.csv").string()}}}};
  return finish_summary(out, std::move(summary), {});
}

// ---------------------------------------------------------------- covariance

int run_covariance(const CommonOpts& opts) {
  const json cfg = load_json_file(opts.config_path);
  check_keys(cfg, {"depth", "x_ref", "hawkes", "taxonomy", "spec"}, "covariance config");

  std::optional<EventTaxonomy> taxonomy;
  std::optional<HawkesSpec> spec;
  double x_ref = cfg.value("x_ref", 1.0);
  if (cfg.contains("spec") && cfg.contains("taxonomy")) {
    taxonomy = taxonomy_from_json(cfg.at("taxonomy"));
    spec = hawkes_spec_from_json(cfg.at("spec"));
  } else if (cfg.contains("hawkes") && cfg.contains("depth")) {
    // reuse the strict micro-config parser for the per-level parameters
    json micro{{"mode", "hawkes"},
               {"depth", cfg.at("depth")},
               {"hawkes", cfg.at("hawkes")}};
    const MicroConfig parsed = micro_config_from_json(micro);
    AssembledCovarianceInput assembled =
        assemble_covariance_input(*parsed.hawkes, parsed.depth, x_ref);
    taxonomy = std::move(assembled.taxonomy);
    spec = std::move(assembled.spec);
  } else {
    throw std::invalid_argument(
        "covariance config: provide either {spec, taxonomy} or {depth, hawkes}");
  }

  const CovarianceBundle bundle = covariance_bundle(*spec, *taxonomy);
  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);
  write_json_file(out / "bundle.json", to_json(bundle));

  const double round_trip =
      frobenius_relative_error(bundle.gamma * bundle.gamma.transpose(), bundle.sigma_x);
  const double ones_residual =
      (bundle.sigma_x * Vector::Ones(bundle.sigma_x.rows())).cwiseAbs().maxCoeff();
  json summary{{"subcommand", "covariance"},
               {"config", cfg},
               {"resolved", resolved_block(opts, 1)},
               {"x_ref", x_ref},
               {"metrics",
                json{{"M", bundle.k.rows()},
                     {"factor_round_trip_rel_err", round_trip},
                     {"sigma_x_ones_residual", ones_residual}}},
               {"outputs", json{{"bundle_json", (out / "bundle.json").string()}}}};
  std::vector<Check> checks{check_leq("factor_round_trip_rel_err", round_trip, 1e-10)};
  return finish_summary(out, std::move(summary), checks);
}

// ---------------------------------------------------------------- verify-*

int run_verify_fclt(const CommonOpts& opts, std::vector<double> n_list, int replicates_flag) {
  const json cfg = load_json_file(opts.config_path);
  check_keys(cfg, {"spec", "n", "T", "replicates", "tolerances"}, "fclt config");
  if (!cfg.contains("spec")) throw std::invalid_argument("fclt config: 'spec' is required");
  const HawkesSpec spec = hawkes_spec_from_json(cfg.at("spec"));
  const double t_end = cfg.value("T", 1.0);
  const int replicates = replicates_flag > 0 ? replicates_flag : cfg.value("replicates", 2000);
  if (n_list.empty()) {
    if (cfg.contains("n") && cfg.at("n").is_array())
      for (const auto& v : cfg.at("n")) n_list.push_back(v.get<double>());
    else
      n_list.push_back(cfg.value("n", 1e4));
  }
  const int threads = resolve_threads(opts);
  const double rate_tol = tolerance(cfg, "rate", 0.02);
  const double cov_tol = tolerance(cfg, "covariance", 0.10);

  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);
  CsvWriter trend(out / "fclt.csv");
  trend.row({"n", "rate_rel_err", "cov_frobenius_rel_err"});
  std::vector<FcltReport> reports;
  for (const double n : n_list) {
    reports.push_back(empirical_fclt(spec, n, t_end, replicates, opts.seed, threads));
    trend.row({CsvWriter::num(n), CsvWriter::num(reports.back().rate_rel_err),
               CsvWriter::num(reports.back().frobenius_rel_err)});
  }
  const FcltReport& last = reports.back();
  write_fclt_matrices_csv(out / "fclt_covariance.csv", last);

  std::vector<Check> checks{check_leq("rate_rel_err", last.rate_rel_err, rate_tol),
                            check_leq("cov_frobenius_rel_err", last.frobenius_rel_err, cov_tol)};
  if (reports.size() > 1)
    checks.push_back(check_leq("cov_err_trend_last_vs_first", last.frobenius_rel_err,
                               reports.front().frobenius_rel_err));

  json summary{{"subcommand", "verify-fclt"},
               {"config", cfg},
               {"resolved", resolved_block(opts, threads)},
               {"n", n_list},
               {"T", t_end},
               {"replicates", replicates},
               {"metrics",
                json{{"rate_rel_err", last.rate_rel_err},
                     {"cov_frobenius_rel_err", last.frobenius_rel_err}}},
               {"outputs",
                json{{"trend_csv", (out / "fclt.csv").string()},
                     {"covariance_csv", (out / "fclt_covariance.csv").string()}}}};
  return finish_summary(out, std::move(summary), checks);
}

int run_verify_generator(const CommonOpts& opts, std::vector<double> n_list) {
  const json cfg = load_json_file(opts.config_path);
  check_keys(cfg, {"coefficients", "function", "probes", "tolerances"}, "generator config");
  if (!cfg.contains("coefficients"))
    throw std::invalid_argument("generator config: 'coefficients' is required");
  const EffectiveCoefficients coeffs = coefficients_from_json(cfg.at("coefficients"));
  const TestFunction f = cfg.contains("function")
                             ? test_function_from_json(cfg.at("function"), coeffs.levels())
                             : TestFunction::neumann_cosine(Vector::Ones(coeffs.levels()),
                                                            Vector::Ones(coeffs.levels()));
  if (n_list.empty()) n_list = {256.0, 1024.0, 4096.0};

  double lo = 0.25, hi = 4.0;
  int count = 128;
  std::uint64_t probe_seed = 17;
  if (cfg.contains("probes")) {
    const json& p = cfg.at("probes");
    check_keys(p, {"lo", "hi", "count", "seed"}, "probes");
    lo = p.value("lo", lo);
    hi = p.value("hi", hi);
    count = p.value("count", count);
    probe_seed = p.value("seed", probe_seed);
  }
  const std::vector<Vector> probes = default_probe_points(coeffs.levels(), lo, hi, count,
                                                          probe_seed);
  const GeneratorConvergenceReport report =
      generator_convergence_report(f, coeffs, n_list, probes);

  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);
  write_generator_report_csv(out / "generator_decay.csv", report);

  const double lo_frac = tolerance(cfg, "ratio_lo_frac", 0.8);
  const double hi_frac = tolerance(cfg, "ratio_hi_frac", 1.25);
  std::vector<Check> checks{check_flag("decay_rate_sqrt_n", report.decay_ok(lo_frac, hi_frac))};

  json ratios = json::array();
  for (const double r : report.ratios()) ratios.push_back(r);
  json summary{{"subcommand", "verify-generator"},
               {"config", cfg},
               {"resolved", resolved_block(opts, 1)},
               {"n", n_list},
               {"metrics", json{{"sup_errors", report.sup_errors}, {"ratios", ratios}}},
               {"outputs", json{{"decay_csv", (out / "generator_decay.csv").string()}}}};
  return finish_summary(out, std::move(summary), checks);
}

int run_verify_converge(const CommonOpts& opts, std::vector<double> n_list, double horizon,
                        int replicates_flag) {
  const json cfg = load_json_file(opts.config_path);
  check_keys(cfg,
             {"coefficients", "x0", "replicates", "meso_dt", "block_boundary_migration",
              "tolerances"},
             "converge config");
  if (!cfg.contains("coefficients"))
    throw std::invalid_argument("converge config: 'coefficients' is required");
  const EffectiveCoefficients coeffs = coefficients_from_json(cfg.at("coefficients"));
  const Vector x0 = cfg.contains("x0") ? vector_from_json(cfg.at("x0"), "x0", coeffs.levels())
                                       : Vector::Ones(coeffs.levels());
  const int replicates = replicates_flag > 0 ? replicates_flag : cfg.value("replicates", 500);
  const double meso_dt = cfg.value("meso_dt", 1e-3);
  const bool block_boundary = cfg.value("block_boundary_migration", false);
  std::vector<long> scales;
  if (n_list.empty()) n_list = {400.0, 1600.0, 6400.0};
  for (const double n : n_list) scales.push_back(std::lround(n));

  const int threads = resolve_threads(opts);
  const MomentComparisonReport report = micro_meso_moment_comparison(
      coeffs, x0, scales, horizon, replicates, opts.seed, threads, meso_dt, block_boundary);

  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);
  write_moment_comparison_csv(out / "moment_convergence.csv", report);

  const double final_tol = tolerance(cfg, "final_max_err", 0.10);
  std::vector<Check> checks{
      check_leq("final_max_rel_err", report.max_err_at(scales.back()), final_tol),
      check_flag("errors_decrease", report.errors_decrease())};

  json summary{{"subcommand", "verify-converge"},
               {"config", cfg},
               {"resolved", resolved_block(opts, threads)},
               {"n", n_list},
               {"horizon", horizon},
               {"replicates", replicates},
               {"metrics",
                json{{"final_max_rel_err", report.max_err_at(scales.back())},
                     {"avg_mean_err_first", report.avg_err(scales.front(), false)},
                     {"avg_mean_err_last", report.avg_err(scales.back(), false)},
                     {"avg_var_err_first", report.avg_err(scales.front(), true)},
                     {"avg_var_err_last", report.avg_err(scales.back(), true)}}},
               {"outputs",
                json{{"convergence_csv", (out / "moment_convergence.csv").string()}}}};
  return finish_summary(out, std::move(summary), checks);
}

int run_verify_reflection(const CommonOpts& opts, std::optional<double> dt_override) {
  const json cfg = opts.config_path.empty() ? json::object() : load_json_file(opts.config_path);
  check_keys(cfg, {"drain", "rbm", "heat"}, "reflection config");
  const json drain_cfg = cfg.value("drain", json::object());
  const json rbm_cfg = cfg.value("rbm", json::object());
  const json heat_cfg = cfg.value("heat", json::object());
  check_keys(drain_cfg, {"dt", "horizon", "tol"}, "drain");
  check_keys(rbm_cfg, {"dt", "horizon", "paths", "se_multiple"}, "rbm");
  check_keys(heat_cfg, {"depth", "alpha_b", "dt", "horizon", "tol", "mode"}, "heat");

  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);
  const int threads = resolve_threads(opts);
  std::vector<Check> checks;
  json metrics;

  // deterministic drain: sigma = 0, h = -1, x0 = 1; X_t = max(1-t, 0),
  // eta_t = max(t-1, 0)
  {
    const double dt = dt_override.value_or(drain_cfg.value("dt", 1e-3));
    const double horizon = drain_cfg.value("horizon", 2.0);
    const double tol = drain_cfg.value("tol", 2e-3);
    MesoConfig config{EffectiveCoefficients::uniform(2, ScalarMap::constant(0.0),
                                                     ScalarMap::constant(0.0),
                                                     ScalarMap::constant(1.0), 0.0),
                      MesoConfig::NoiseMode::diagonal,
                      std::nullopt,
                      std::nullopt,
                      dt,
                      Vector::Ones(1)};
    config.validate();
    MesoState state{config.x0, Vector::Zero(1), 0.0};
    const long steps = std::lround(horizon / dt);
    CsvWriter csv(out / "drain.csv");
    csv.row({"t", "x", "eta", "x_exact", "eta_exact"});
    double max_x_err = 0.0, max_eta_err = 0.0;
    const Vector dw = Vector::Zero(1);
    auto record = [&](const MesoState& s) {
      const double x_exact = std::max(1.0 - s.t, 0.0);
      const double eta_exact = std::max(s.t - 1.0, 0.0);
      max_x_err = std::max(max_x_err, std::abs(s.x[0] - x_exact));
      max_eta_err = std::max(max_eta_err, std::abs(s.eta[0] - eta_exact));
      csv.row({CsvWriter::num(s.t), CsvWriter::num(s.x[0]), CsvWriter::num(s.eta[0]),
               CsvWriter::num(x_exact), CsvWriter::num(eta_exact)});
    };
    record(state);
    for (long i = 0; i < steps; ++i) {
      state = step_reflected_euler(state, dt, dw, config);
      record(state);
    }
    checks.push_back(check_leq("drain_max_x_err", max_x_err, tol));
    checks.push_back(check_leq("drain_max_eta_err", max_eta_err, tol));
    metrics["drain"] = json{{"max_x_err", max_x_err}, {"max_eta_err", max_eta_err}};
  }

  // reflected Brownian motion from the origin: terminal mean sqrt(2/pi)
  {
    const double dt = dt_override.value_or(rbm_cfg.value("dt", 1e-3));
    const double horizon = rbm_cfg.value("horizon", 1.0);
    const int paths = rbm_cfg.value("paths", 10000);
    const double se_multiple = rbm_cfg.value("se_multiple", 3.0);
    MesoConfig config{EffectiveCoefficients::uniform(2, ScalarMap::constant(1.0),
                                                     ScalarMap::constant(0.0),
                                                     ScalarMap::constant(0.0), 0.0),
                      MesoConfig::NoiseMode::diagonal,
                      std::nullopt,
                      std::nullopt,
                      dt,
                      Vector::Zero(1)};
    const MesoEnsemble ensemble =
        simulate_meso(config, horizon, paths, opts.seed, threads, 1 << 20, nullptr, 0);
    MomentAccumulator acc;
    for (Index p = 0; p < ensemble.terminal_x.rows(); ++p) acc.add(ensemble.terminal_x(p, 0));
    const double target = std::sqrt(2.0 * horizon / std::numbers::pi);
    const double se = acc.std_error_of_mean();
    const double deviation = std::abs(acc.mean() - target);
    checks.push_back(check_leq("rbm_mean_deviation", deviation, se_multiple * se));
    checks.push_back(check_flag("rbm_no_negativity", ensemble.negativity_violations == 0));
    checks.push_back(
        check_flag("rbm_complementarity", ensemble.complementarity_violations == 0));
    checks.push_back(check_flag("rbm_eta_monotone", ensemble.eta_decrease_violations == 0));
    metrics["rbm"] = json{{"mean", acc.mean()},
                          {"target", target},
                          {"std_error", se},
                          {"deviation", deviation}};
  }

  // Laplacian relaxation against the Dirichlet sine-mode solution
  {
    const int depth = heat_cfg.value("depth", 8);
    const double alpha_b = heat_cfg.value("alpha_b", 1.0);
    const double dt = heat_cfg.value("dt", 1e-4);
    const double horizon = heat_cfg.value("horizon", 1.0);
    const double tol = heat_cfg.value("tol", 1e-6);
    const int mode = heat_cfg.value("mode", 1);
    const Index levels = depth - 1;
    const auto [lambda, v] = dirichlet_mode(levels, mode);
    const HeatRelaxation heat = heat_relaxation(alpha_b, v, dt, horizon, 100);
    write_heat_csv(out / "heat.csv", heat);
    const Index last = heat.grid.size() - 1;
    const Vector numeric = heat.numeric.row(last).transpose();
    const Vector exact = heat.closed_form.row(last).transpose();
    const double rel = (numeric - exact).norm() / exact.norm();
    // total mass is non-increasing under pinned ends
    long mass_increases = 0;
    for (Index s = 0; s + 1 < heat.grid.size(); ++s)
      if (heat.numeric.row(s + 1).sum() > heat.numeric.row(s).sum() + 1e-12) ++mass_increases;
    checks.push_back(check_leq("heat_terminal_rel_err", rel, tol));
    checks.push_back(check_flag("heat_mass_nonincreasing", mass_increases == 0));
    metrics["heat"] = json{{"terminal_rel_err", rel},
                           {"decay_rate", lambda * alpha_b},
                           {"max_rel_err", heat.max_rel_err}};
  }

  json summary{{"subcommand", "verify-reflection"},
               {"config", cfg},
               {"resolved", resolved_block(opts, threads)},
               {"metrics", metrics},
               {"outputs",
                json{{"drain_csv", (out / "drain.csv").string()},
                     {"heat_csv", (out / "heat.csv").string()}}}};
  return finish_summary(out, std::move(summary), checks);
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Hawkes-driven limit order book simulation and verification toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  double horizon = 1.0;
  double conv_horizon = 0.5;
  int replicates = 0;
  std::vector<double> n_list;
  std::optional<double> dt_override;
  double dt_value = 0.0;

  std::function<int()> handler;

  auto* sim_hawkes = app.add_subcommand("simulate-hawkes", "simulate a Hawkes event log");
  add_common(sim_hawkes, opts);
  sim_hawkes->add_option("--horizon", horizon, "time horizon")->required();
  sim_hawkes->callback([&] { handler = [&] { return run_simulate_hawkes(opts, horizon); }; });

  auto* sim_micro = app.add_subcommand("simulate-micro", "simulate the microscopic book");
  add_common(sim_micro, opts);
  sim_micro->add_option("--horizon", horizon,
                        "horizon (rescaled clock in expansion mode, micro clock in hawkes mode)")
      ->required();
  sim_micro->callback([&] { handler = [&] { return run_simulate_micro(opts, horizon); }; });

  auto* sim_meso = app.add_subcommand("simulate-meso", "integrate the reflected SDE ensemble");
  add_common(sim_meso, opts);
  sim_meso->add_option("--horizon", horizon, "time horizon")->required();
  sim_meso->add_option("--replicates", replicates, "number of paths (default 100)");
  auto* meso_dt_opt = sim_meso->add_option("--dt", dt_value, "step override");
  sim_meso->callback([&, meso_dt_opt] {
    handler = [&, meso_dt_opt] {
      if (meso_dt_opt->count()) dt_override = dt_value;
      return run_simulate_meso(opts, horizon, replicates > 0 ? replicates : 100, dt_override);
    };
  });

  auto* cov = app.add_subcommand("covariance", "compute the diffusion covariance bundle");
  add_common(cov, opts);
  cov->callback([&] { handler = [&] { return run_covariance(opts); }; });

  auto* vfclt = app.add_subcommand("verify-fclt", "empirical FCLT covariance check");
  add_common(vfclt, opts);
  vfclt->add_option("--n", n_list, "scale(s)")->delimiter(',');
  vfclt->add_option("--replicates", replicates, "replicates");
  vfclt->callback([&] { handler = [&] { return run_verify_fclt(opts, n_list, replicates); }; });

  auto* vgen = app.add_subcommand("verify-generator", "generator convergence check");
  add_common(vgen, opts);
  vgen->add_option("--n", n_list, "lattice scales, e.g. 256,1024,4096")->delimiter(',');
  vgen->callback([&] { handler = [&] { return run_verify_generator(opts, n_list); }; });

  auto* vconv = app.add_subcommand("verify-converge", "micro vs meso moment convergence");
  add_common(vconv, opts);
  vconv->add_option("--n", n_list, "scales, e.g. 400,1600,6400")->delimiter(',');
  vconv->add_option("--horizon", conv_horizon, "rescaled horizon (default 0.5)");
  vconv->add_option("--replicates", replicates, "replicates per scale");
  vconv->callback([&] {
    handler = [&] { return run_verify_converge(opts, n_list, conv_horizon, replicates); };
  });

  auto* vrefl = app.add_subcommand("verify-reflection", "reflection, RBM and heat-flow checks");
  add_common(vrefl, opts, /*config_required=*/false);
  auto* refl_dt_opt = vrefl->add_option("--dt", dt_value, "step override for drain and rbm");
  vrefl->callback([&, refl_dt_opt] {
    handler = [&, refl_dt_opt] {
      if (refl_dt_opt->count()) dt_override = dt_value;
      return run_verify_reflection(opts, dt_override);
    };
  });

  std::vector<const char*> argv;
  argv.push_back("hawkes_lob");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (!handler) {
      std::cerr << "error: no subcommand selected\n";
      return 1;
    }
    return handler();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hawkeslob::cli
