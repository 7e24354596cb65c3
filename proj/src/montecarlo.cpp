#include "phidiv/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "phidiv/divergence.hpp"
#include "phidiv/errors.hpp"
#include "phidiv/estimate.hpp"
#include "phidiv/likelihood.hpp"
#include "phidiv/simulate.hpp"

namespace phidiv {

// ---------------------------------------------------------------------------
// Configuration

ModelKind parse_model_kind(const std::string& text) {
  if (text == "vasicek") return ModelKind::vasicek;
  if (text == "cir") return ModelKind::cir;
  throw ConfigError("unknown model '" + text + "' (expected vasicek or cir)");
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::vasicek:
      return "vasicek";
    case ModelKind::cir:
      return "cir";
    case ModelKind::custom:
      return "custom";
  }
  return "?";
}

DiffusionModel make_builtin_model(ModelKind kind, const ParamVector& theta) {
  if (theta.p() != 2 || theta.q() != 1) {
    throw InvalidParameterError("built-in models take (kappa, mean, sigma2)");
  }
  switch (kind) {
    case ModelKind::vasicek:
      return vasicek_model(theta.alpha[0], theta.alpha[1], theta.beta[0]);
    case ModelKind::cir:
      return cir_model(theta.alpha[0], theta.alpha[1], theta.beta[0]);
    case ModelKind::custom:
      break;
  }
  throw InvalidParameterError("no built-in model for kind 'custom'");
}

QuantileMethod parse_quantile_method(const std::string& text) {
  if (text == "analytic") return QuantileMethod::analytic();
  if (text.rfind("mc:", 0) == 0) {
    const std::string rest = text.substr(3);
    const auto colon = rest.find(':');
    try {
      std::size_t used = 0;
      const std::string draws_text = rest.substr(0, colon);
      const long long draws = std::stoll(draws_text, &used);
      if (used != draws_text.size() || draws < 1) throw std::invalid_argument(draws_text);
      QuantileMethod m = QuantileMethod::mc(static_cast<std::size_t>(draws));
      if (colon != std::string::npos) {
        const std::string seed_text = rest.substr(colon + 1);
        m.seed = std::stoull(seed_text, &used);
        if (used != seed_text.size()) throw std::invalid_argument(seed_text);
      }
      return m;
    } catch (const std::logic_error&) {
      // fall through to the error below
    }
  }
  throw ConfigError("quantile method must be 'analytic', 'mc:N' or 'mc:N:SEED', got '" + text +
                    "'");
}

std::string to_string(const QuantileMethod& method) {
  if (method.kind == QuantileMethod::Kind::analytic) return "analytic";
  return "mc:" + std::to_string(method.draws) + ":" + std::to_string(method.seed);
}

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  if (model == ModelKind::custom) problems.emplace_back("model: must be vasicek or cir");
  if (generating_models.empty()) problems.emplace_back("generating_models: empty");
  for (const GeneratorSpec& g : generating_models) {
    try {
      make_builtin_model(model, g.theta);
    } catch (const Error& e) {
      problems.push_back("generating_models[" + g.label + "]: " + e.what());
    }
  }
  try {
    make_builtin_model(model, null_theta);
  } catch (const Error& e) {
    problems.push_back(std::string("null_theta: ") + e.what());
  }
  if (families.empty()) problems.emplace_back("families: empty");
  for (const std::string& f : families) {
    try {
      parse_phi_spec(f);
    } catch (const Error& e) {
      problems.push_back("families: " + std::string(e.what()));
    }
  }
  if (n.empty()) problems.emplace_back("n: empty");
  for (std::size_t v : n) {
    if (v < 1 || v > burn_in_total) {
      problems.push_back("n: " + std::to_string(v) + " must lie in [1, burn_in_total]");
    }
  }
  if (delta.empty()) problems.emplace_back("delta: empty");
  for (double d : delta) {
    if (!(d > 0.0) || !std::isfinite(d)) problems.emplace_back("delta: entries must be positive");
  }
  if (levels.empty()) problems.emplace_back("levels: empty");
  for (double l : levels) {
    if (!(l > 0.0 && l < 1.0)) problems.emplace_back("levels: entries must lie in (0, 1)");
  }
  if (m < 1) problems.emplace_back("m: must be at least 1");
  if (restarts < 1) problems.emplace_back("restarts: must be at least 1");
  if (!problems.empty()) {
    std::string msg = "invalid experiment config:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
}

namespace {

ParamVector theta_from_json(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(key + ": expected [kappa, mean, sigma2]");
  }
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(key + ": entries must be numbers");
  }
  return mean_reverting_theta(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

nlohmann::json theta_to_json(const ParamVector& theta) {
  return nlohmann::json::array({theta.alpha[0], theta.alpha[1], theta.beta[0]});
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  static const std::set<std::string> known{
      "model",  "generating_models", "null_theta",  "families",    "n",
      "delta",  "levels",            "m",           "burn_in_total", "master_seed",
      "quantile_method", "x0",       "restarts",    "description"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  std::vector<std::string> unknown;
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) unknown.push_back(key);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const std::string& k : unknown) msg += " " + k;
    throw ConfigError(msg);
  }
  for (const char* required : {"model", "generating_models", "null_theta", "families", "n", "delta"}) {
    if (!j.contains(required)) throw ConfigError(std::string("missing config key: ") + required);
  }

  ExperimentConfig c;
  try {
    c.model = parse_model_kind(j.at("model").get<std::string>());
    for (const auto& g : j.at("generating_models")) {
      GeneratorSpec spec;
      spec.label = g.at("label").get<std::string>();
      spec.theta = theta_from_json(g.at("theta"), "generating_models[" + spec.label + "].theta");
      c.generating_models.push_back(std::move(spec));
    }
    c.null_theta = theta_from_json(j.at("null_theta"), "null_theta");
    c.families = j.at("families").get<std::vector<std::string>>();
    for (const auto& v : j.at("n")) {
      const long long n = v.get<long long>();
      if (n < 1) throw ConfigError("n: entries must be positive");
      c.n.push_back(static_cast<std::size_t>(n));
    }
    c.delta = j.at("delta").get<std::vector<double>>();
    if (j.contains("levels")) c.levels = j.at("levels").get<std::vector<double>>();
    if (j.contains("m")) {
      const long long m = j.at("m").get<long long>();
      if (m < 0) throw ConfigError("m: must be nonnegative");
      c.m = static_cast<std::size_t>(m);
    }
    if (j.contains("burn_in_total")) c.burn_in_total = j.at("burn_in_total").get<std::size_t>();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("quantile_method")) {
      c.quantile_method = parse_quantile_method(j.at("quantile_method").get<std::string>());
    }
    if (j.contains("x0")) c.x0 = j.at("x0").get<double>();
    if (j.contains("restarts")) c.restarts = j.at("restarts").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["model"] = to_string(c.model);
  j["generating_models"] = nlohmann::json::array();
  for (const GeneratorSpec& g : c.generating_models) {
    j["generating_models"].push_back({{"label", g.label}, {"theta", theta_to_json(g.theta)}});
  }
  j["null_theta"] = theta_to_json(c.null_theta);
  j["families"] = c.families;
  j["n"] = c.n;
  j["delta"] = c.delta;
  j["levels"] = c.levels;
  j["m"] = c.m;
  j["burn_in_total"] = c.burn_in_total;
  j["master_seed"] = c.master_seed;
  j["quantile_method"] = to_string(c.quantile_method);
  if (c.x0) j["x0"] = *c.x0;
  j["restarts"] = c.restarts;
  return j;
}

// ---------------------------------------------------------------------------
// Replication kernel

namespace {

const char* family_kind_name(PhiKind kind) {
  switch (kind) {
    case PhiKind::alpha:
      return "alpha";
    case PhiKind::power:
      return "power";
    case PhiKind::log:
      return "log";
    case PhiKind::custom:
      return "custom";
  }
  return "?";
}

// Everything the replications share, prepared once.
struct Plan {
  const ExperimentConfig* config;
  DiffusionModel null_model;
  std::vector<PhiFamily> families;
  std::vector<std::vector<double>> thresholds;  // [family][level]

  explicit Plan(const ExperimentConfig& c)
      : config(&c), null_model(make_builtin_model(c.model, c.null_theta)) {
    for (const std::string& f : c.families) families.push_back(parse_phi_spec(f));
    // Quantiles depend only on (family, df, level): computed once per run.
    for (const PhiFamily& fam : families) {
      const LimitLaw law = limit_law(fam, null_model.p(), null_model.q());
      std::vector<double> per_level;
      if (c.quantile_method.kind == QuantileMethod::Kind::mc) {
        const LimitLawSample sample(law, c.quantile_method.draws, c.quantile_method.seed);
        for (double level : c.levels) per_level.push_back(sample.threshold(level));
      } else {
        for (double level : c.levels) per_level.push_back(threshold(law, level, c.quantile_method));
      }
      thresholds.push_back(std::move(per_level));
    }
  }
};

struct Replicate {
  std::vector<char> failed;      // [n]
  std::vector<double> statistic;  // [n][family]
};

Replicate run_replicate(const Plan& plan, const GeneratorSpec& gen, double delta, std::size_t m) {
  const ExperimentConfig& c = *plan.config;
  const std::size_t nf = plan.families.size();
  Replicate out;
  out.failed.assign(c.n.size(), 0);
  out.statistic.assign(c.n.size() * nf, 0.0);

  const double x0 = c.x0 ? *c.x0 : gen.theta.alpha[1];
  ObservedPath full;
  try {
    full = simulate(plan.null_model, gen.theta, x0, c.burn_in_total, delta, {c.master_seed, m});
  } catch (const Error&) {
    std::fill(out.failed.begin(), out.failed.end(), 1);
    return out;
  }

  FitOptions fit_options;
  fit_options.restarts = c.restarts;
  fit_options.jitter_seed = splitmix64(c.master_seed ^ splitmix64(m));

  for (std::size_t ni = 0; ni < c.n.size(); ++ni) {
    try {
      const ObservedPath path = burn_in_extract(full, c.n[ni]);
      const FitResult fit = qmle_fit(plan.null_model, path, c.null_theta, fit_options);
      const double r = dcfz_loglik(plan.null_model, fit.theta_hat, path) -
                       dcfz_loglik(plan.null_model, c.null_theta, path);
      for (std::size_t fi = 0; fi < nf; ++fi) {
        out.statistic[ni * nf + fi] = statistic_from_log_ratio(plan.families[fi], r).statistic;
      }
    } catch (const Error&) {
      out.failed[ni] = 1;
    }
  }
  return out;
}

void aggregate(const Plan& plan, const GeneratorSpec& gen, double delta,
               const std::vector<Replicate>& reps, ExperimentResult& result) {
  const ExperimentConfig& c = *plan.config;
  const std::size_t nf = plan.families.size();
  for (std::size_t ni = 0; ni < c.n.size(); ++ni) {
    std::size_t failures = 0;
    for (const Replicate& r : reps) failures += r.failed[ni] ? 1 : 0;
    const std::size_t valid = reps.size() - failures;
    for (std::size_t fi = 0; fi < nf; ++fi) {
      double stat_sum = 0.0;
      for (const Replicate& r : reps) {
        if (!r.failed[ni]) stat_sum += r.statistic[ni * nf + fi];
      }
      for (std::size_t li = 0; li < c.levels.size(); ++li) {
        const double cut = plan.thresholds[fi][li];
        std::size_t rejections = 0;
        for (const Replicate& r : reps) {
          if (!r.failed[ni] && r.statistic[ni * nf + fi] > cut) ++rejections;
        }
        ExperimentCell cell;
        cell.model = gen.label;
        cell.n = c.n[ni];
        cell.delta = delta;
        cell.family = family_kind_name(plan.families[fi].kind);
        cell.family_param = plan.families[fi].param;
        cell.level = c.levels[li];
        cell.fit_failures = failures;
        cell.rejections = rejections;
        cell.rejection_rate = valid > 0 ? static_cast<double>(rejections) / static_cast<double>(valid)
                                        : std::numeric_limits<double>::quiet_NaN();
        cell.mean_statistic = valid > 0 ? stat_sum / static_cast<double>(valid)
                                        : std::numeric_limits<double>::quiet_NaN();
        result.cells.push_back(std::move(cell));
      }
    }
  }
}

template <typename Driver>
ExperimentResult run_with(const ExperimentConfig& config, Driver&& drive) {
  config.validate();
  const Plan plan(config);
  ExperimentResult result;
  for (const GeneratorSpec& gen : config.generating_models) {
    for (double delta : config.delta) {
      std::vector<Replicate> reps(config.m);
      drive(reps, [&](std::size_t m) { return run_replicate(plan, gen, delta, m); });
      aggregate(plan, gen, delta, reps, result);
    }
  }
  return result;
}

}  // namespace

ExperimentResult run_experiment_serial(const ExperimentConfig& config) {
  return run_with(config, [](std::vector<Replicate>& reps, auto&& one) {
    for (std::size_t m = 0; m < reps.size(); ++m) reps[m] = one(m);
  });
}

ExperimentResult run_experiment(const ExperimentConfig& config, int workers) {
  return run_with(config, [workers](std::vector<Replicate>& reps, auto&& one) {
    const auto count = static_cast<long long>(reps.size());
    if (workers <= 0) {
#pragma omp parallel for schedule(dynamic, 8)
      for (long long m = 0; m < count; ++m) reps[m] = one(static_cast<std::size_t>(m));
    } else {
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers)
      for (long long m = 0; m < count; ++m) reps[m] = one(static_cast<std::size_t>(m));
    }
  });
}

// ---------------------------------------------------------------------------
// Tables

const ExperimentCell* ExperimentResult::find(std::string_view model, std::size_t n, double delta,
                                             std::string_view family, double family_param,
                                             double level) const {
  for (const ExperimentCell& c : cells) {
    if (c.model == model && c.n == n && c.delta == delta && c.family == family &&
        c.family_param == family_param && c.level == level) {
      return &c;
    }
  }
  return nullptr;
}

namespace {

constexpr const char* kCsvHeader =
    "model,n,delta,family,family_param,level,rejection_rate,fit_failures";

std::string csv_table(const ExperimentResult& result) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << kCsvHeader << '\n';
  for (const ExperimentCell& c : result.cells) {
    out << c.model << ',' << c.n << ',' << c.delta << ',' << c.family << ',' << c.family_param
        << ',' << c.level << ',' << c.rejection_rate << ',' << c.fit_failures << '\n';
  }
  return out.str();
}

// One block per (delta, family); rows "LABEL (n)", one column per level.
std::string text_table(const ExperimentResult& result) {
  using Key = std::tuple<double, std::string, double>;
  std::vector<Key> blocks;
  for (const ExperimentCell& c : result.cells) {
    const Key k{c.delta, c.family, c.family_param};
    if (std::find(blocks.begin(), blocks.end(), k) == blocks.end()) blocks.push_back(k);
  }

  std::ostringstream out;
  for (const Key& block : blocks) {
    const auto& [delta, family, param] = block;
    std::vector<double> levels;
    std::vector<std::pair<std::string, std::size_t>> rows;
    for (const ExperimentCell& c : result.cells) {
      if (c.delta != delta || c.family != family || c.family_param != param) continue;
      if (std::find(levels.begin(), levels.end(), c.level) == levels.end()) {
        levels.push_back(c.level);
      }
      const std::pair<std::string, std::size_t> row{c.model, c.n};
      if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
    }
    // Grouped by n, then generator.
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });

    out << "family " << family;
    if (family != "log") out << ' ' << param;
    out << ", delta " << delta << '\n';
    out << std::left << std::setw(16) << "model (n)";
    for (double l : levels) {
      std::ostringstream head;
      head << "level=" << l;
      out << std::right << std::setw(12) << head.str();
    }
    out << '\n';
    std::size_t previous_n = rows.empty() ? 0 : rows.front().second;
    for (const auto& [label, n] : rows) {
      if (n != previous_n) out << '\n';
      previous_n = n;
      out << std::left << std::setw(16) << (label + " (" + std::to_string(n) + ")");
      for (double l : levels) {
        const ExperimentCell* c = result.find(label, n, delta, family, param, l);
        out << std::right << std::setw(12) << std::fixed << std::setprecision(2)
            << (c ? c->rejection_rate : std::numeric_limits<double>::quiet_NaN());
        out.unsetf(std::ios::floatfield);
        out << std::setprecision(6);
      }
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string export_table(const ExperimentResult& result, TableFormat format) {
  return format == TableFormat::csv ? csv_table(result) : text_table(result);
}

ExperimentResult parse_table_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError("table CSV must start with the header '" + std::string(kCsvHeader) + "'");
  }
  ExperimentResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 8) throw ConfigError("table CSV row has " + std::to_string(f.size()) + " fields");
    try {
      ExperimentCell c;
      c.model = f[0];
      c.n = static_cast<std::size_t>(std::stoull(f[1]));
      c.delta = std::stod(f[2]);
      c.family = f[3];
      c.family_param = std::stod(f[4]);
      c.level = std::stod(f[5]);
      c.rejection_rate = std::stod(f[6]);
      c.fit_failures = static_cast<std::size_t>(std::stoull(f[7]));
      result.cells.push_back(std::move(c));
    } catch (const std::logic_error&) {
      throw ConfigError("malformed number in table CSV row: " + line);
    }
  }
  return result;
}

}  // namespace phidiv
