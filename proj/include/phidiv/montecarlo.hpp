#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "phidiv/limitlaw.hpp"
#include "phidiv/models.hpp"
#include "phidiv/phi_family.hpp"

namespace phidiv {

struct GeneratorSpec {
  std::string label;  // e.g. "VAS1"
  ParamVector theta;
};

// One empirical level / power study. Every replication simulates
// burn_in_total transitions under each generator, keeps the last n for each
// n in the grid, fits theta_hat by QMLE started at null_theta and compares
// each family's statistic with its limit-law threshold.
struct ExperimentConfig {
  ModelKind model = ModelKind::vasicek;
  std::vector<GeneratorSpec> generating_models;
  ParamVector null_theta;
  std::vector<std::string> families;  // "log", "alpha:A", "power:L"
  std::vector<std::size_t> n;
  std::vector<double> delta;
  std::vector<double> levels{0.01, 0.05};
  std::size_t m = 2000;
  std::size_t burn_in_total = 1000;
  std::uint64_t master_seed = 1;
  QuantileMethod quantile_method = QuantileMethod::analytic();
  std::optional<double> x0;  // defaults to each generator's mean level
  std::size_t restarts = 3;

  // Throws ConfigError naming every problem found.
  void validate() const;
};

// Accepts the snake_case keys listed in ExperimentConfig; unknown keys are
// rejected (ConfigError lists them).
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

// "analytic", "mc:N" or "mc:N:SEED".
QuantileMethod parse_quantile_method(const std::string& text);
std::string to_string(const QuantileMethod& method);

// "vasicek" or "cir".
ModelKind parse_model_kind(const std::string& text);
const char* to_string(ModelKind kind);

// Built-in model of the given kind with its default box around theta.
DiffusionModel make_builtin_model(ModelKind kind, const ParamVector& theta);

struct ExperimentCell {
  std::string model;  // generator label
  std::size_t n = 0;
  double delta = 0.0;
  std::string family;  // "log", "alpha" or "power"
  double family_param = 0.0;
  double level = 0.0;
  double rejection_rate = 0.0;  // rejections / (m - fit_failures)
  std::size_t fit_failures = 0;
  std::size_t rejections = 0;
  double mean_statistic = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentCell> cells;

  const ExperimentCell* find(std::string_view model, std::size_t n, double delta,
                             std::string_view family, double family_param, double level) const;
};

// Replications are spread over OpenMP threads (workers == 0: OpenMP default).
// Results are bitwise identical to run_experiment_serial for any worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, int workers = 0);
ExperimentResult run_experiment_serial(const ExperimentConfig& config);

enum class TableFormat { csv, text };

// CSV columns: model,n,delta,family,family_param,level,rejection_rate,fit_failures
std::string export_table(const ExperimentResult& result, TableFormat format);

// Inverse of the CSV export (fields present in the CSV only).
ExperimentResult parse_table_csv(std::string_view csv);

}  // namespace phidiv
