#pragma once

#include "hawkeslob/convergence.hpp"
#include "hawkeslob/covariance.hpp"
#include "hawkeslob/generator.hpp"
#include "hawkeslob/hawkes.hpp"
#include "hawkeslob/lob_micro.hpp"
#include "hawkeslob/meso.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace hawkeslob {

using json = nlohmann::json;

/// Rejects any key of `obj` not listed in `allowed`, naming the offending key.
void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& context);

json load_json_file(const std::filesystem::path& path);

// ---- matrices and vectors (row-major flat arrays; nested rows accepted) ----
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, Index rows, Index cols, const std::string& name);
Vector vector_from_json(const json& j, const std::string& name, Index expected = -1);
/// Scalar broadcast or per-level array of length `levels`.
Vector levels_from_json(const json& j, Index levels, const std::string& name);

// ---- domain types ----
json to_json(const HawkesSpec& spec);
HawkesSpec hawkes_spec_from_json(const json& j);

json to_json(const ScalarMap& map);
ScalarMap scalar_map_from_json(const json& j, const std::string& name);

json to_json(const EffectiveCoefficients& coeffs);
EffectiveCoefficients coefficients_from_json(const json& j);

json to_json(const MicroConfig& config);
MicroConfig micro_config_from_json(const json& j);

json to_json(const MesoConfig& config);
MesoConfig meso_config_from_json(const json& j);

json to_json(const EventTaxonomy& taxonomy);
EventTaxonomy taxonomy_from_json(const json& j);

json to_json(const CovarianceBundle& bundle);

TestFunction test_function_from_json(const json& j, Index dim);

// ---- CSV (comma separator, '.' decimal point, LF endings, headers) ----
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  void row(const std::vector<std::string>& cells);

  static std::string num(double v);
  static std::string num(long v);
  static std::string num(int v) { return num(static_cast<long>(v)); }

 private:
  std::ofstream out_;
};

void write_event_log_csv(const std::filesystem::path& path, const EventLog& log);
void write_micro_events_csv(const std::filesystem::path& path, const MicroPath& micro_path);
void write_micro_snapshots_csv(const std::filesystem::path& path, const MicroPath& micro_path,
                               Side side, double step_micro);
void write_meso_moments_csv(const std::filesystem::path& path, const MesoEnsemble& ensemble);
void write_meso_path_csv(const std::filesystem::path& path, const Vector& grid,
                         const Matrix& states);
void write_generator_report_csv(const std::filesystem::path& path,
                                const GeneratorConvergenceReport& report);
void write_moment_comparison_csv(const std::filesystem::path& path,
                                 const MomentComparisonReport& report);
void write_fclt_matrices_csv(const std::filesystem::path& path, const FcltReport& report);
void write_heat_csv(const std::filesystem::path& path, const HeatRelaxation& heat);

void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace hawkeslob
