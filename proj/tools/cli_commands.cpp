#include "cli_commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "phidiv/divergence.hpp"
#include "phidiv/errors.hpp"
#include "phidiv/estimate.hpp"
#include "phidiv/montecarlo.hpp"
#include "phidiv/simulate.hpp"

namespace phidiv::cli {

namespace {

std::vector<double> parse_doubles(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::logic_error&) {
      throw CLI::ValidationError(flag, "not a number: '" + field + "'");
    }
  }
  return out;
}

ParamVector parse_theta(const std::string& text, const char* flag) {
  const std::vector<double> v = parse_doubles(text, flag);
  if (v.size() != 3) throw CLI::ValidationError(flag, "expected kappa,mean,sigma2");
  return mean_reverting_theta(v[0], v[1], v[2]);
}

// "lo:hi,lo:hi,lo:hi"
std::vector<Interval> parse_box(const std::string& text) {
  std::vector<Interval> box;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    const auto colon = field.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--box", "expected lo:hi pairs");
    const std::vector<double> lo = parse_doubles(field.substr(0, colon), "--box");
    const std::vector<double> hi = parse_doubles(field.substr(colon + 1), "--box");
    if (lo.size() != 1 || hi.size() != 1) throw CLI::ValidationError("--box", "expected lo:hi");
    box.push_back({lo[0], hi[0]});
  }
  if (box.size() != 3) throw CLI::ValidationError("--box", "expected three intervals");
  return box;
}

void print_theta(std::ostream& out, const char* key, const ParamVector& theta) {
  out << key << '=' << theta.alpha[0] << ',' << theta.alpha[1] << ',' << theta.beta[0] << '\n';
}

void warn_feller(ModelKind kind, const ParamVector& theta, std::ostream& err) {
  if (kind != ModelKind::cir) return;
  const double ratio = feller_ratio(theta.alpha[0], theta.alpha[1], theta.beta[0]);
  if (ratio <= 1.0) {
    err << "warning: Feller condition fails (2 kappa mean / sigma2 = " << ratio
        << "); the process can reach zero\n";
  }
}

ObservedPath load_path(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read data file '" + file + "'");
  return read_path_csv(in);
}

struct SimulateArgs {
  std::string model;
  std::string params;
  std::size_t n = 0;
  double delta = 0.0;
  std::uint64_t seed = 1;
  std::size_t burnin = 0;
  std::optional<double> x0;
  std::string out;
};

struct FitArgs {
  std::string model;
  std::string data;
  std::string start;
  std::size_t restarts = 3;
  std::string box;
};

struct TestArgs {
  std::string model;
  std::string data;
  std::string theta0;
  std::string phi;
  double level = 0.05;
  std::string quantile = "analytic";
  std::uint64_t seed = 0x9a3e17ULL;
  std::size_t restarts = 3;
};

struct TableArgs {
  std::string config;
  int workers = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const ModelKind kind = parse_model_kind(a.model);
  const ParamVector theta = parse_theta(a.params, "--params");
  const DiffusionModel model = make_builtin_model(kind, theta);
  warn_feller(kind, theta, err);
  const double x0 = a.x0 ? *a.x0 : theta.alpha[1];
  const ObservedPath full = simulate(model, theta, x0, a.n + a.burnin, a.delta, {a.seed, 0});
  const ObservedPath path = burn_in_extract(full, a.n);

  std::ofstream file(a.out);
  if (!file) throw Error("cannot write '" + a.out + "'");
  write_path_csv(file, path);
  out << "wrote " << path.x.size() << " observations to " << a.out << '\n';
  return kExitOk;
}

int cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  const ModelKind kind = parse_model_kind(a.model);
  const ParamVector start = parse_theta(a.start, "--start");
  DiffusionModel model = make_builtin_model(kind, start);
  if (!a.box.empty()) model = model.with_box(parse_box(a.box));
  warn_feller(kind, start, err);
  const ObservedPath path = load_path(a.data);

  FitOptions options;
  options.restarts = a.restarts;
  const FitResult fit = qmle_fit(model, path, start, options);
  print_theta(out, "theta_hat", fit.theta_hat);
  out << "loglik=" << fit.loglik << '\n';
  out << "converged=" << (fit.converged ? "true" : "false") << '\n';
  out << "iterations=" << fit.iterations << '\n';
  out << "restarts_used=" << fit.restarts_used << '\n';
  return kExitOk;
}

int cmd_test(const TestArgs& a, std::ostream& out, std::ostream& err) {
  const ModelKind kind = parse_model_kind(a.model);
  const ParamVector theta0 = parse_theta(a.theta0, "--theta0");
  const PhiFamily family = parse_phi_spec(a.phi);
  if (!(a.level > 0.0 && a.level < 1.0)) throw CLI::ValidationError("--level", "must lie in (0, 1)");
  QuantileMethod quantile;
  try {
    quantile = parse_quantile_method(a.quantile);
  } catch (const ConfigError& e) {
    throw CLI::ValidationError("--quantile", e.what());
  }
  if (quantile.kind == QuantileMethod::Kind::mc && a.quantile.find(':', 3) == std::string::npos) {
    quantile.seed = a.seed;
  }
  const DiffusionModel model = make_builtin_model(kind, theta0);
  warn_feller(kind, theta0, err);
  const ObservedPath path = load_path(a.data);

  TestOptions options;
  options.quantile = quantile;
  options.fit.restarts = a.restarts;
  const TestReport r = run_test(model, family, path, theta0, a.level, options);
  out << "family=" << r.family_name << '\n';
  out << "df=" << r.df << '\n';
  out << "level=" << r.level << '\n';
  print_theta(out, "theta_hat", r.fit.theta_hat);
  out << "log_ratio=" << r.log_ratio << '\n';
  out << "swapped=" << (r.swapped ? "true" : "false") << '\n';
  out << "statistic=" << r.statistic << '\n';
  out << "threshold=" << r.threshold << '\n';
  out << "p_value=" << r.p_value << '\n';
  out << "decision=" << (r.reject ? "reject" : "accept") << '\n';
  return kExitOk;
}

int cmd_table(const TableArgs& a, std::ostream& out, std::ostream&) {
  std::ifstream in(a.config);
  if (!in) throw Error("cannot read config file '" + a.config + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const ExperimentConfig config = parse_experiment_config(j);
  const ExperimentResult result = run_experiment(config, a.workers);
  const std::string csv = export_table(result, TableFormat::csv);
  if (a.out.empty()) {
    out << csv;
    return kExitOk;
  }
  std::ofstream file(a.out, std::ios::binary);
  if (!file) throw Error("cannot write '" + a.out + "'");
  file << csv;
  out << export_table(result, TableFormat::text);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"phi-divergence tests for discretely observed diffusions", "phidiv"};
  app.require_subcommand(1);
  app.allow_extras(false);

  const std::vector<std::string> models{"vasicek", "cir"};

  SimulateArgs sim;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "simulate an observed path");
  simulate_cmd->add_option("--model", sim.model, "vasicek or cir")
      ->required()
      ->check(CLI::IsMember(models));
  simulate_cmd->add_option("--params", sim.params, "kappa,mean,sigma2")->required();
  simulate_cmd->add_option("--n", sim.n, "number of transitions kept")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--delta", sim.delta, "observation step")->required();
  simulate_cmd->add_option("--seed", sim.seed, "master seed");
  simulate_cmd->add_option("--burnin", sim.burnin, "transitions discarded before the kept ones");
  simulate_cmd->add_option("--x0", sim.x0, "start value (default: mean)");
  simulate_cmd->add_option("--out", sim.out, "output CSV")->required();

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "quasi-maximum likelihood fit");
  fit_cmd->add_option("--model", fit.model, "vasicek or cir")->required()->check(CLI::IsMember(models));
  fit_cmd->add_option("--data", fit.data, "path CSV (t,x)")->required();
  fit_cmd->add_option("--start", fit.start, "kappa,mean,sigma2")->required();
  fit_cmd->add_option("--restarts", fit.restarts, "total number of starts")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--box", fit.box, "parameter box lo:hi,lo:hi,lo:hi");

  TestArgs test;
  CLI::App* test_cmd = app.add_subcommand("test", "phi-divergence test of H0: theta = theta0");
  test_cmd->add_option("--model", test.model, "vasicek or cir")
      ->required()
      ->check(CLI::IsMember(models));
  test_cmd->add_option("--data", test.data, "path CSV (t,x)")->required();
  test_cmd->add_option("--theta0", test.theta0, "kappa,mean,sigma2")->required();
  test_cmd->add_option("--phi", test.phi, "log | alpha:A | power:L")->required();
  test_cmd->add_option("--level", test.level, "test level");
  test_cmd->add_option("--quantile", test.quantile, "analytic | mc:N");
  test_cmd->add_option("--seed", test.seed, "seed of the mc quantile draws");
  test_cmd->add_option("--restarts", test.restarts, "total number of fit starts")
      ->check(CLI::PositiveNumber);

  TableArgs table;
  CLI::App* table_cmd = app.add_subcommand("table", "empirical level and power tables");
  table_cmd->add_option("--config", table.config, "experiment JSON")->required();
  table_cmd->add_option("--workers", table.workers, "OpenMP threads (0: default)")
      ->check(CLI::NonNegativeNumber);
  table_cmd->add_option("--out", table.out, "CSV output; the text table goes to stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto old_out = out.precision(17);
  try {
    int code = kExitOk;
    if (*simulate_cmd) code = cmd_simulate(sim, out, err);
    if (*fit_cmd) code = cmd_fit(fit, out, err);
    if (*test_cmd) code = cmd_test(test, out, err);
    if (*table_cmd) code = cmd_table(table, out, err);
    out.precision(old_out);
    return code;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
  } catch (const InvalidPhiError& e) {
    err << "usage error: " << e.what() << '\n';
  } catch (const Error& e) {
    out.precision(old_out);
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  out.precision(old_out);
  return kExitUsage;
}

}  // namespace phidiv::cli
