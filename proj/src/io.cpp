#include "hawkeslob/io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

namespace hawkeslob {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
  if (!obj.is_object())
    throw std::invalid_argument(context + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key()))
      throw std::invalid_argument(context + ": unknown key '" + it.key() + "'");
  }
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

json matrix_to_json(const Matrix& m) {
  json flat = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
  return flat;
}

Matrix matrix_from_json(const json& j, Index rows, Index cols, const std::string& name) {
  if (!j.is_array()) throw std::invalid_argument(name + ": expected an array");
  Matrix m(rows, cols);
  if (!j.empty() && j[0].is_array()) {  // nested rows
    if (static_cast<Index>(j.size()) != rows)
      throw std::invalid_argument(name + ": expected " + std::to_string(rows) + " rows");
    for (Index i = 0; i < rows; ++i) {
      const auto& row = j[static_cast<std::size_t>(i)];
      if (static_cast<Index>(row.size()) != cols)
        throw std::invalid_argument(name + ": row " + std::to_string(i) + " has wrong length");
      for (Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
  }
  if (static_cast<Index>(j.size()) != rows * cols)
    throw std::invalid_argument(name + ": expected " + std::to_string(rows * cols) +
                                " entries (row-major)");
  for (Index i = 0; i < rows; ++i)
    for (Index c = 0; c < cols; ++c)
      m(i, c) = j[static_cast<std::size_t>(i * cols + c)].get<double>();
  return m;
}

Vector vector_from_json(const json& j, const std::string& name, Index expected) {
  if (!j.is_array()) throw std::invalid_argument(name + ": expected an array");
  if (expected >= 0 && static_cast<Index>(j.size()) != expected)
    throw std::invalid_argument(name + ": expected length " + std::to_string(expected));
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

Vector levels_from_json(const json& j, Index levels, const std::string& name) {
  if (j.is_number()) return Vector::Constant(levels, j.get<double>());
  return vector_from_json(j, name, levels);
}

namespace {

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json int_vector_to_json(const IntVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

IntVector int_vector_from_json(const json& j, Index levels, const std::string& name) {
  if (j.is_number()) return IntVector::Constant(levels, j.get<int>());
  if (!j.is_array() || static_cast<Index>(j.size()) != levels)
    throw std::invalid_argument(name + ": expected length " + std::to_string(levels));
  IntVector v(levels);
  for (Index i = 0; i < levels; ++i) v[i] = j[static_cast<std::size_t>(i)].get<int>();
  return v;
}

}  // namespace

json to_json(const HawkesSpec& spec) {
  return json{{"M", spec.size()},
              {"mu", vector_to_json(spec.mu())},
              {"alpha", matrix_to_json(spec.alpha())},
              {"beta", matrix_to_json(spec.beta())}};
}

HawkesSpec hawkes_spec_from_json(const json& j) {
  check_keys(j, {"M", "mu", "alpha", "beta"}, "hawkes spec");
  if (!j.contains("M") || !j.contains("mu") || !j.contains("alpha") || !j.contains("beta"))
    throw std::invalid_argument("hawkes spec: keys M, mu, alpha, beta are required");
  const Index m = j.at("M").get<Index>();
  if (m < 1) throw std::invalid_argument("hawkes spec: M must be >= 1");
  return HawkesSpec(vector_from_json(j.at("mu"), "mu", m),
                    matrix_from_json(j.at("alpha"), m, m, "alpha"),
                    matrix_from_json(j.at("beta"), m, m, "beta"));
}

json to_json(const ScalarMap& map) {
  if (map.is_affine())
    return json{{"type", "affine"}, {"c0", map.affine_c0()}, {"c1", map.affine_c1()}};
  json x = json::array(), v = json::array();
  for (Index i = 0; i < map.grid().size(); ++i) {
    x.push_back(map.grid()[i]);
    v.push_back(map.values()[i]);
  }
  return json{{"type", "pwl"}, {"x", x}, {"v", v}};
}

ScalarMap scalar_map_from_json(const json& j, const std::string& name) {
  if (j.is_number()) return ScalarMap::constant(j.get<double>());
  check_keys(j, {"type", "c0", "c1", "x", "v"}, name);
  const std::string type = j.value("type", "affine");
  if (type == "affine") return ScalarMap::affine(j.value("c0", 0.0), j.value("c1", 0.0));
  if (type == "pwl")
    return ScalarMap::piecewise_linear(vector_from_json(j.at("x"), name + ".x"),
                                       vector_from_json(j.at("v"), name + ".v"));
  throw std::invalid_argument(name + ": unknown map type '" + type + "'");
}

namespace {

std::vector<ScalarMap> maps_from_json(const json& j, Index levels, const std::string& name) {
  if (j.is_array()) {
    if (static_cast<Index>(j.size()) != levels)
      throw std::invalid_argument(name + ": expected one map per level (" +
                                  std::to_string(levels) + ")");
    std::vector<ScalarMap> maps;
    for (Index k = 0; k < levels; ++k)
      maps.push_back(scalar_map_from_json(j[static_cast<std::size_t>(k)],
                                          name + "[" + std::to_string(k) + "]"));
    return maps;
  }
  return std::vector<ScalarMap>(static_cast<std::size_t>(levels),
                                scalar_map_from_json(j, name));
}

json maps_to_json(const std::vector<ScalarMap>& maps) {
  json arr = json::array();
  for (const auto& m : maps) arr.push_back(to_json(m));
  return arr;
}

}  // namespace

json to_json(const EffectiveCoefficients& coeffs) {
  return json{{"depth", coeffs.depth()},
              {"alpha_b", coeffs.alpha_b()},
              {"sigma_sq", maps_to_json(coeffs.sigma_sq_maps())},
              {"f", maps_to_json(coeffs.f_maps())},
              {"g", maps_to_json(coeffs.g_maps())}};
}

EffectiveCoefficients coefficients_from_json(const json& j) {
  check_keys(j, {"depth", "alpha_b", "sigma_sq", "f", "g"}, "coefficients");
  if (!j.contains("depth")) throw std::invalid_argument("coefficients: depth is required");
  const int depth = j.at("depth").get<int>();
  if (depth < 2) throw std::invalid_argument("coefficients: depth must be >= 2");
  const Index levels = depth - 1;
  const ScalarMap zero = ScalarMap::constant(0.0);
  auto field = [&](const char* key) {
    return j.contains(key) ? maps_from_json(j.at(key), levels, key)
                           : std::vector<ScalarMap>(static_cast<std::size_t>(levels), zero);
  };
  return EffectiveCoefficients(depth, field("sigma_sq"), field("f"), field("g"),
                               j.value("alpha_b", 0.0));
}

namespace {

KernelBlock kernel_block_from_json(const json& parent, const char* key, Index levels,
                                   const std::string& context, const char* jump_key = "alpha",
                                   const char* decay_key = "beta") {
  KernelBlock block{Vector::Zero(levels), Vector::Ones(levels)};
  if (!parent.contains(key)) return block;
  const json& j = parent.at(key);
  check_keys(j, {jump_key, decay_key}, context + "." + key);
  if (j.contains(jump_key)) block.jump = levels_from_json(j.at(jump_key), levels, jump_key);
  if (j.contains(decay_key)) block.decay = levels_from_json(j.at(decay_key), levels, decay_key);
  return block;
}

json kernel_block_to_json(const KernelBlock& block, const char* jump_key = "alpha",
                          const char* decay_key = "beta") {
  json arr_j = json::array(), arr_d = json::array();
  for (Index i = 0; i < block.jump.size(); ++i) {
    arr_j.push_back(block.jump[i]);
    arr_d.push_back(block.decay[i]);
  }
  return json{{jump_key, arr_j}, {decay_key, arr_d}};
}

}  // namespace

json to_json(const MicroConfig& config) {
  json j{{"mode", config.mode == MicroConfig::Mode::hawkes ? "hawkes" : "expansion"},
         {"depth", config.depth},
         {"scale", config.scale},
         {"block_boundary_migration", config.block_boundary_migration},
         {"rate_cap", config.rate_cap},
         {"initial_bid", int_vector_to_json(config.initial_bid)},
         {"initial_ask", int_vector_to_json(config.initial_ask)}};
  if (config.hawkes) {
    const HawkesModeParams& p = *config.hawkes;
    j["hawkes"] = json{
        {"arrival",
         json{{"c0", vector_to_json(p.arrival_baseline.c0)},
              {"c1", vector_to_json(p.arrival_baseline.c1)},
              {"from_arrival", kernel_block_to_json(p.arrival_from_arrival)},
              {"from_removal", kernel_block_to_json(p.arrival_from_removal)},
              {"from_migration", kernel_block_to_json(p.arrival_from_migration)}}},
        {"removal",
         json{{"c0", vector_to_json(p.removal_baseline.c0)},
              {"c1", vector_to_json(p.removal_baseline.c1)},
              {"from_arrival", kernel_block_to_json(p.removal_from_arrival)},
              {"from_removal", kernel_block_to_json(p.removal_from_removal)}}},
        {"migration",
         json{{"eta", vector_to_json(p.migration.eta)},
              {"from_arrival",
               kernel_block_to_json({p.migration.kappa_arrival, p.migration.rho_arrival},
                                    "kappa", "rho")},
              {"from_removal",
               kernel_block_to_json({p.migration.kappa_removal, p.migration.rho_removal},
                                    "kappa", "rho")},
              {"from_migration",
               kernel_block_to_json({p.migration.kappa_migration, p.migration.rho_migration},
                                    "kappa", "rho")}}}};
  }
  if (config.coeffs) j["coefficients"] = to_json(*config.coeffs);
  return j;
}

MicroConfig micro_config_from_json(const json& j) {
  check_keys(j,
             {"mode", "depth", "scale", "block_boundary_migration", "rate_cap", "initial_bid",
              "initial_ask", "hawkes", "coefficients", "snapshot_dt"},
             "micro config");
  MicroConfig config;
  const std::string mode = j.value("mode", "expansion");
  if (mode == "hawkes")
    config.mode = MicroConfig::Mode::hawkes;
  else if (mode == "expansion")
    config.mode = MicroConfig::Mode::expansion;
  else
    throw std::invalid_argument("micro config: unknown mode '" + mode + "'");
  if (!j.contains("depth")) throw std::invalid_argument("micro config: depth is required");
  config.depth = j.at("depth").get<int>();
  if (config.depth < 2) throw std::invalid_argument("micro config: depth must be >= 2");
  const Index levels = config.depth - 1;
  config.scale = j.value("scale", 1L);
  config.block_boundary_migration = j.value("block_boundary_migration", true);
  config.rate_cap = j.value("rate_cap", 1e9);
  config.initial_bid = j.contains("initial_bid")
                           ? int_vector_from_json(j.at("initial_bid"), levels, "initial_bid")
                           : IntVector::Zero(levels);
  config.initial_ask = j.contains("initial_ask")
                           ? int_vector_from_json(j.at("initial_ask"), levels, "initial_ask")
                           : IntVector::Zero(levels);

  if (config.mode == MicroConfig::Mode::hawkes) {
    if (!j.contains("hawkes"))
      throw std::invalid_argument("micro config: hawkes mode requires a 'hawkes' section");
    const json& h = j.at("hawkes");
    check_keys(h, {"arrival", "removal", "migration"}, "hawkes section");
    HawkesModeParams p;
    const json empty = json::object();
    const json& arr = h.contains("arrival") ? h.at("arrival") : empty;
    check_keys(arr, {"c0", "c1", "from_arrival", "from_removal", "from_migration"},
               "hawkes.arrival");
    p.arrival_baseline.c0 = arr.contains("c0") ? levels_from_json(arr.at("c0"), levels, "c0")
                                               : Vector::Zero(levels);
    p.arrival_baseline.c1 = arr.contains("c1") ? levels_from_json(arr.at("c1"), levels, "c1")
                                               : Vector::Zero(levels);
    p.arrival_from_arrival = kernel_block_from_json(arr, "from_arrival", levels, "arrival");
    p.arrival_from_removal = kernel_block_from_json(arr, "from_removal", levels, "arrival");
    p.arrival_from_migration = kernel_block_from_json(arr, "from_migration", levels, "arrival");

    const json& rem = h.contains("removal") ? h.at("removal") : empty;
    check_keys(rem, {"c0", "c1", "from_arrival", "from_removal"}, "hawkes.removal");
    p.removal_baseline.c0 = rem.contains("c0") ? levels_from_json(rem.at("c0"), levels, "c0")
                                               : Vector::Zero(levels);
    p.removal_baseline.c1 = rem.contains("c1") ? levels_from_json(rem.at("c1"), levels, "c1")
                                               : Vector::Zero(levels);
    p.removal_from_arrival = kernel_block_from_json(rem, "from_arrival", levels, "removal");
    p.removal_from_removal = kernel_block_from_json(rem, "from_removal", levels, "removal");

    const json& mig = h.contains("migration") ? h.at("migration") : empty;
    check_keys(mig, {"eta", "from_arrival", "from_removal", "from_migration"},
               "hawkes.migration");
    p.migration.eta = mig.contains("eta") ? levels_from_json(mig.at("eta"), levels, "eta")
                                          : Vector::Zero(levels);
    const KernelBlock ka =
        kernel_block_from_json(mig, "from_arrival", levels, "migration", "kappa", "rho");
    const KernelBlock kr =
        kernel_block_from_json(mig, "from_removal", levels, "migration", "kappa", "rho");
    const KernelBlock km =
        kernel_block_from_json(mig, "from_migration", levels, "migration", "kappa", "rho");
    p.migration.kappa_arrival = ka.jump;
    p.migration.rho_arrival = ka.decay;
    p.migration.kappa_removal = kr.jump;
    p.migration.rho_removal = kr.decay;
    p.migration.kappa_migration = km.jump;
    p.migration.rho_migration = km.decay;
    config.hawkes = std::move(p);
  } else if (j.contains("coefficients")) {
    config.coeffs = coefficients_from_json(j.at("coefficients"));
  } else {
    throw std::invalid_argument("micro config: expansion mode requires 'coefficients'");
  }
  config.validate();
  return config;
}

json to_json(const MesoConfig& config) {
  json j{{"coefficients", to_json(config.coeffs)},
         {"noise_mode",
          config.noise_mode == MesoConfig::NoiseMode::correlated ? "correlated" : "diagonal"},
         {"dt", config.dt},
         {"x0", vector_to_json(config.x0)}};
  if (config.gamma) j["gamma"] = matrix_to_json(*config.gamma);
  if (config.sigma_x) j["sigma_x"] = matrix_to_json(*config.sigma_x);
  return j;
}

MesoConfig meso_config_from_json(const json& j) {
  check_keys(j,
             {"coefficients", "noise_mode", "gamma", "sigma_x", "dt", "x0", "output_stride",
              "dump_paths"},
             "meso config");
  if (!j.contains("coefficients"))
    throw std::invalid_argument("meso config: 'coefficients' is required");
  EffectiveCoefficients coeffs = coefficients_from_json(j.at("coefficients"));
  const Index levels = coeffs.levels();
  MesoConfig config{std::move(coeffs), MesoConfig::NoiseMode::diagonal, std::nullopt,
                    std::nullopt, j.value("dt", 1e-3), Vector::Zero(levels)};
  const std::string mode = j.value("noise_mode", "diagonal");
  if (mode == "correlated")
    config.noise_mode = MesoConfig::NoiseMode::correlated;
  else if (mode != "diagonal")
    throw std::invalid_argument("meso config: unknown noise_mode '" + mode + "'");
  if (j.contains("x0")) config.x0 = vector_from_json(j.at("x0"), "x0", levels);
  if (j.contains("gamma"))
    config.gamma = matrix_from_json(j.at("gamma"), levels, levels, "gamma");
  if (j.contains("sigma_x"))
    config.sigma_x = matrix_from_json(j.at("sigma_x"), levels, levels, "sigma_x");
  config.validate();
  return config;
}

json to_json(const EventTaxonomy& taxonomy) {
  json entries = json::array();
  for (const auto& e : taxonomy.entries)
    entries.push_back(json{{"kind", to_string(e.kind)}, {"level", e.level}});
  return json{{"depth", taxonomy.depth}, {"entries", entries}};
}

EventTaxonomy taxonomy_from_json(const json& j) {
  check_keys(j, {"depth", "entries"}, "taxonomy");
  if (!j.contains("depth") || !j.contains("entries"))
    throw std::invalid_argument("taxonomy: keys depth and entries are required");
  std::vector<EventTaxonomy::Entry> entries;
  for (const auto& e : j.at("entries")) {
    check_keys(e, {"kind", "level"}, "taxonomy entry");
    entries.push_back(
        {flow_kind_from_string(e.at("kind").get<std::string>()), e.at("level").get<int>()});
  }
  return EventTaxonomy(j.at("depth").get<int>(), std::move(entries));
}

json to_json(const CovarianceBundle& bundle) {
  return json{{"M", bundle.k.rows()},
              {"levels", bundle.sigma_x.rows()},
              {"K", matrix_to_json(bundle.k)},
              {"lambda_bar", vector_to_json(bundle.lambda_bar)},
              {"sigma_n", matrix_to_json(bundle.sigma_n)},
              {"incidence", matrix_to_json(bundle.incidence)},
              {"sigma_x", matrix_to_json(bundle.sigma_x)},
              {"gamma", matrix_to_json(bundle.gamma)}};
}

TestFunction test_function_from_json(const json& j, Index dim) {
  check_keys(j, {"type", "value", "weights", "amplitude", "omega", "knots", "values"},
             "test function");
  const std::string type = j.value("type", "neumann_cosine");
  if (type == "constant") return TestFunction::constant(dim, j.value("value", 1.0));
  if (type == "quadratic")
    return TestFunction::quadratic_bump(
        j.contains("weights") ? levels_from_json(j.at("weights"), dim, "weights")
                              : Vector::Ones(dim));
  if (type == "neumann_cosine") {
    const Vector amplitude = j.contains("amplitude")
                                 ? levels_from_json(j.at("amplitude"), dim, "amplitude")
                                 : Vector::Ones(dim);
    const Vector omega = j.contains("omega") ? levels_from_json(j.at("omega"), dim, "omega")
                                             : Vector::Constant(dim, 1.0);
    return TestFunction::neumann_cosine(amplitude, omega);
  }
  if (type == "tabulated") {
    if (!j.contains("knots") || !j.contains("values"))
      throw std::invalid_argument("test function: tabulated type needs knots and values");
    const Vector knots = vector_from_json(j.at("knots"), "knots");
    const json& values = j.at("values");
    if (!values.is_array() || static_cast<Index>(values.size()) != dim)
      throw std::invalid_argument("test function: values must hold one table per level");
    std::vector<CubicSpline> tables;
    for (Index k = 0; k < dim; ++k)
      tables.emplace_back(knots, vector_from_json(values[static_cast<std::size_t>(k)],
                                                  "values", knots.size()));
    return TestFunction::tabulated(std::move(tables));
  }
  throw std::invalid_argument("test function: unknown type '" + type + "'");
}

CsvWriter::CsvWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot open output file " + path.string());
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

std::string CsvWriter::num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvWriter::num(long v) { return std::to_string(v); }

void write_event_log_csv(const std::filesystem::path& path, const EventLog& log) {
  CsvWriter csv(path);
  csv.row({"time", "type"});
  for (const auto& ev : log.events()) csv.row({CsvWriter::num(ev.time), CsvWriter::num(ev.type)});
}

void write_micro_events_csv(const std::filesystem::path& path, const MicroPath& micro_path) {
  CsvWriter csv(path);
  csv.row({"time", "side", "kind", "level"});
  for (const auto& ev : micro_path.events)
    csv.row({CsvWriter::num(ev.time), to_string(ev.side), to_string(ev.kind),
             CsvWriter::num(ev.level)});
}

void write_micro_snapshots_csv(const std::filesystem::path& path, const MicroPath& micro_path,
                               Side side, double step_micro) {
  if (!(step_micro > 0.0))
    throw std::invalid_argument("write_micro_snapshots_csv: step must be > 0");
  const Index levels = micro_path.initial.levels();
  CsvWriter csv(path);
  std::vector<std::string> header{"time"};
  for (Index k = 1; k <= levels; ++k) header.push_back("level_" + std::to_string(k));
  csv.row(header);

  BookState state = micro_path.initial;
  std::size_t next_event = 0;
  for (double t = 0.0; t <= micro_path.horizon_micro + 1e-12 * micro_path.horizon_micro;
       t += step_micro) {
    while (next_event < micro_path.events.size() &&
           micro_path.events[next_event].time <= t) {
      state = apply_event(std::move(state), micro_path.events[next_event]);
      ++next_event;
    }
    std::vector<std::string> row{CsvWriter::num(t)};
    for (Index k = 0; k < levels; ++k)
      row.push_back(CsvWriter::num(static_cast<long>(state.side(side)[k])));
    csv.row(row);
  }
}

void write_meso_moments_csv(const std::filesystem::path& path, const MesoEnsemble& ensemble) {
  CsvWriter csv(path);
  csv.row({"t", "level", "mean", "var"});
  for (Index s = 0; s < ensemble.grid.size(); ++s)
    for (Index k = 0; k < ensemble.mean.cols(); ++k)
      csv.row({CsvWriter::num(ensemble.grid[s]), CsvWriter::num(static_cast<long>(k + 1)),
               CsvWriter::num(ensemble.mean(s, k)), CsvWriter::num(ensemble.variance(s, k))});
}

void write_meso_path_csv(const std::filesystem::path& path, const Vector& grid,
                         const Matrix& states) {
  CsvWriter csv(path);
  std::vector<std::string> header{"t"};
  for (Index k = 1; k <= states.cols(); ++k) header.push_back("level_" + std::to_string(k));
  csv.row(header);
  for (Index s = 0; s < grid.size(); ++s) {
    std::vector<std::string> row{CsvWriter::num(grid[s])};
    for (Index k = 0; k < states.cols(); ++k) row.push_back(CsvWriter::num(states(s, k)));
    csv.row(row);
  }
}

void write_generator_report_csv(const std::filesystem::path& path,
                                const GeneratorConvergenceReport& report) {
  CsvWriter csv(path);
  csv.row({"n", "probe_sup_error"});
  for (std::size_t i = 0; i < report.n_values.size(); ++i)
    csv.row({CsvWriter::num(report.n_values[i]), CsvWriter::num(report.sup_errors[i])});
}

void write_moment_comparison_csv(const std::filesystem::path& path,
                                 const MomentComparisonReport& report) {
  CsvWriter csv(path);
  csv.row({"n", "level", "mean_err", "var_err"});
  for (const auto& row : report.rows)
    csv.row({CsvWriter::num(row.n), CsvWriter::num(row.level), CsvWriter::num(row.mean_rel_err),
             CsvWriter::num(row.var_rel_err)});
}

void write_fclt_matrices_csv(const std::filesystem::path& path, const FcltReport& report) {
  CsvWriter csv(path);
  csv.row({"row", "col", "empirical", "theoretical"});
  for (Index i = 0; i < report.empirical.rows(); ++i)
    for (Index j = 0; j < report.empirical.cols(); ++j)
      csv.row({CsvWriter::num(static_cast<long>(i)), CsvWriter::num(static_cast<long>(j)),
               CsvWriter::num(report.empirical(i, j)), CsvWriter::num(report.theoretical(i, j))});
}

void write_heat_csv(const std::filesystem::path& path, const HeatRelaxation& heat) {
  CsvWriter csv(path);
  csv.row({"t", "level", "numeric", "closed_form"});
  for (Index s = 0; s < heat.grid.size(); ++s)
    for (Index k = 0; k < heat.numeric.cols(); ++k)
      csv.row({CsvWriter::num(heat.grid[s]), CsvWriter::num(static_cast<long>(k + 1)),
               CsvWriter::num(heat.numeric(s, k)), CsvWriter::num(heat.closed_form(s, k))});
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace hawkeslob
