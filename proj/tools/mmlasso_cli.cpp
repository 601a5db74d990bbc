// Command-line interface: fit estimators on CSV data, run cross-validation,
// compute asymptotic constants, and drive the simulation benchmark.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mmlasso/asymptotics.hpp"
#include "mmlasso/csv.hpp"
#include "mmlasso/estimators.hpp"
#include "mmlasso/kernels.hpp"
#include "mmlasso/parallel.hpp"
#include "mmlasso/simbench.hpp"

namespace {

using json = nlohmann::json;
using namespace mmlasso;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMissingFile = 2;

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string output;
  bool allow_nonconverged = false;
};

struct FitFlags {
  std::string input;
  std::string response_col;
  std::string estimator = "mmlasso";
  std::optional<double> lambda;
  std::optional<double> iota;
  std::optional<double> gamma;
};

struct SimulateFlags {
  int scenario = 1;
  std::string errors = "normal";
  bool contaminate = false;
  std::vector<double> y0_grid;
  int replications = 100;
  std::vector<std::string> estimators;
};

struct ConstantsFlags {
  std::string errors = "normal";
  double sigma = 1.0;
  double b = 0.5;
  double eff = 0.85;
};

// Expand --config <file.json> into command-line tokens for every flag the
// user did not pass explicitly; explicit flags win. The tokens are inserted
// right after the subcommand name so subcommand options resolve correctly.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config_path;
  std::vector<std::string> used_flags;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const std::string name = a.substr(0, a.find('='));
    used_flags.push_back(name);
    if (name == "--config") {
      if (a.find('=') != std::string::npos)
        config_path = a.substr(a.find('=') + 1);
      else if (i + 1 < args.size())
        config_path = args[i + 1];
    }
  }
  if (config_path.empty()) return args;
  if (!std::filesystem::exists(config_path))
    throw std::runtime_error("config file does not exist: " + config_path);
  std::ifstream in(config_path);
  json cfg = json::parse(in);

  std::vector<std::string> tokens;
  for (auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (std::find(used_flags.begin(), used_flags.end(), flag) !=
        used_flags.end())
      continue;
    auto as_token = [&](const json& v) {
      if (v.is_string()) return flag + "=" + v.get<std::string>();
      if (v.is_boolean()) return v.get<bool>() ? flag : flag + "=false";
      return flag + "=" + v.dump();
    };
    if (value.is_array()) {
      for (const auto& item : value) tokens.push_back(as_token(item));
    } else {
      tokens.push_back(as_token(value));
    }
  }

  // insert after the subcommand token (or append if there is none)
  std::vector<std::string> out;
  bool inserted = false;
  for (const auto& a : args) {
    out.push_back(a);
    if (!inserted && (a == "fit" || a == "cv" || a == "simulate" ||
                      a == "constants")) {
      out.insert(out.end(), tokens.begin(), tokens.end());
      inserted = true;
    }
  }
  if (!inserted) out.insert(out.end(), tokens.begin(), tokens.end());
  return out;
}

Dataset dataset_from_csv(const CsvTable& table, const std::string& response_col,
                         std::vector<std::string>* carrier_names) {
  if (table.values.rows() < 2)
    throw std::runtime_error("input needs at least two data rows");
  Eigen::Index ycol = table.values.cols() - 1;
  if (!response_col.empty()) {
    auto it = std::find(table.header.begin(), table.header.end(), response_col);
    if (it == table.header.end())
      throw std::runtime_error("response column '" + response_col +
                               "' not found in header");
    ycol = static_cast<Eigen::Index>(it - table.header.begin());
  }
  Dataset ds;
  ds.has_intercept = true;
  ds.y = table.values.col(ycol);
  ds.X.resize(table.values.rows(), table.values.cols() - 1);
  Eigen::Index k = 0;
  for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
    if (c == ycol) continue;
    ds.X.col(k++) = table.values.col(c);
    if (carrier_names != nullptr)
      carrier_names->push_back(table.header[static_cast<std::size_t>(c)]);
  }
  if (ds.X.cols() == 0) throw std::runtime_error("input has no carrier columns");
  return ds;
}

std::string default_prefix(const std::string& output, const char* fallback) {
  return output.empty() ? fallback : output;
}

json fit_to_json(const FitResult& fit, const std::vector<std::string>& names,
                 double gamma, double lambda, bool cv_used) {
  json coeffs = json::object();
  for (Eigen::Index j = 0; j < fit.coeffs.size(); ++j)
    coeffs[names[static_cast<std::size_t>(j)]] = fit.coeffs[j];
  return json{{"intercept", fit.intercept},
              {"coefficients", coeffs},
              {"scale", fit.scale},
              {"lambda", lambda},
              {"gamma", gamma},
              {"lambda_from_cv", cv_used},
              {"iterations", fit.iterations},
              {"converged", fit.converged}};
}

std::string coefficients_csv(const FitResult& fit,
                             const std::vector<std::string>& names) {
  std::string out = "name,coefficient\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", fit.intercept);
  out += "(intercept)," + std::string(buf) + "\n";
  for (Eigen::Index j = 0; j < fit.coeffs.size(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", fit.coeffs[j]);
    out += names[static_cast<std::size_t>(j)] + "," + buf + "\n";
  }
  return out;
}

int cmd_fit(const CommonFlags& common, const FitFlags& flags, bool cv_only) {
  if (!std::filesystem::exists(flags.input)) {
    std::cerr << "error: input file does not exist: " << flags.input << "\n";
    return kExitMissingFile;
  }
  CsvTable table = read_csv(flags.input);
  std::vector<std::string> names;
  Dataset ds = dataset_from_csv(table, flags.response_col, &names);

  auto which = parse_estimator(flags.estimator);
  if (!which || *which == Estimator::oracle_ls || *which == Estimator::oracle_mm)
    throw std::runtime_error("unknown estimator: " + flags.estimator);

  PipelineOptions opt;
  opt.seed = common.seed;
  opt.lambda = flags.lambda;
  opt.iota = flags.iota;
  opt.gamma = flags.gamma;

  PipelineResult res = run_estimator(*which, ds, opt);

  const std::string prefix =
      default_prefix(common.output, cv_only ? "mmlasso_cv" : "mmlasso_fit");
  json out = fit_to_json(res.fit, names, res.gamma, res.lambda, res.cv_used);
  out["estimator"] = flags.estimator;
  out["input"] = flags.input;
  write_text_file(prefix + ".json", out.dump(2) + "\n");
  write_text_file(prefix + "_coefficients.csv", coefficients_csv(res.fit, names));
  std::cout << out.dump(2) << "\n";

  if (!res.fit.converged && !common.allow_nonconverged) {
    std::cerr << "error: fit did not converge (use --allow-nonconverged to "
                 "accept it)\n";
    return kExitError;
  }
  return kExitOk;
}

int cmd_simulate(const CommonFlags& common, const SimulateFlags& flags) {
  auto errors = parse_error_kind(flags.errors);
  if (!errors) throw std::runtime_error("unknown error kind: " + flags.errors);
  ScenarioConfig scenario = scenario_config(flags.scenario, *errors, common.seed);

  std::vector<Estimator> estimators;
  if (flags.estimators.empty()) {
    estimators = {Estimator::mmlasso, Estimator::adaptive_mmlasso,
                  Estimator::lslasso, Estimator::adaptive_lslasso,
                  flags.contaminate ? Estimator::oracle_mm
                                    : Estimator::oracle_ls};
  } else {
    for (const auto& name : flags.estimators) {
      auto e = parse_estimator(name);
      if (!e) throw std::runtime_error("unknown estimator: " + name);
      estimators.push_back(*e);
    }
  }

  MonteCarloOptions opt;
  opt.replications = flags.replications;
  opt.contaminated = flags.contaminate;
  if (!flags.y0_grid.empty()) opt.contamination.y0_grid = flags.y0_grid;
  opt.seed = common.seed;
  opt.jobs = common.jobs;

  ScenarioReport report = run_monte_carlo(scenario, estimators, opt);

  const std::string prefix = default_prefix(common.output, "simulation");
  write_text_file(prefix + "_report.csv", report_to_csv(report));
  write_text_file(prefix + "_report.json", report_to_json(report));
  if (flags.contaminate)
    write_text_file(prefix + "_curve.csv", curve_to_csv(report));
  std::cout << report_summary_table(report);

  int failures = 0;
  for (const auto& [name, count] : report.failure_count) failures += count;
  if (failures > 0 && !common.allow_nonconverged) {
    std::cerr << "error: " << failures
              << " replication fits failed (use --allow-nonconverged to "
                 "accept)\n";
    return kExitError;
  }
  return kExitOk;
}

int cmd_constants(const CommonFlags& common, const ConstantsFlags& flags) {
  ErrorDist dist = ErrorDist::normal(flags.sigma);
  if (flags.errors == "t3") dist = ErrorDist::student_t(3);
  else if (flags.errors == "t1") dist = ErrorDist::student_t(1);
  else if (flags.errors != "normal")
    throw std::runtime_error("unknown error kind: " + flags.errors);

  const double c0 = tune_for_scale_consistency(flags.b);
  const double c1 = tune_for_efficiency(flags.eff);
  const RhoSpec rho0{RhoFamily::bisquare, c0};
  const RhoSpec rho1{RhoFamily::bisquare, c1};
  AsymptoticConstants k = asymptotic_constants(rho0, rho1, flags.b, dist);
  const double oracle_scalar = k.s0 * k.s0 * k.a / (k.bconst * k.bconst);

  json out{{"errors", flags.errors},
           {"b", flags.b},
           {"target_efficiency", flags.eff},
           {"c0", c0},
           {"c1", c1},
           {"s0", k.s0},
           {"a", k.a},
           {"bconst", k.bconst},
           {"efficiency", std::isfinite(k.efficiency)
                              ? json(k.efficiency)
                              : json(nullptr)},
           {"oracle_scalar", oracle_scalar}};
  if (flags.errors == "normal") out["sigma"] = flags.sigma;
  std::cout << out.dump(2) << "\n";
  if (!common.output.empty())
    write_text_file(common.output, out.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust sparse regression: MM-Lasso and adaptive MM-Lasso"};
  app.require_subcommand(1);

  CommonFlags common;
  FitFlags fit_flags;
  SimulateFlags sim_flags;
  ConstantsFlags const_flags;

  app.add_option("--config", common.config_path,
                 "JSON file with defaults for any flag (flags override)");
  app.add_option("--seed", common.seed, "random seed");
  app.add_option("--jobs", common.jobs, "worker threads (0 = all cores)");
  app.add_option("--output", common.output, "output path prefix");
  app.add_flag("--allow-nonconverged", common.allow_nonconverged,
               "exit 0 even when fits did not converge");

  auto add_fit_options = [&](CLI::App* sub) {
    sub->add_option("--input", fit_flags.input, "input CSV (header required)")
        ->required();
    sub->add_option("--response-col", fit_flags.response_col,
                    "response column name (default: last column)");
    sub->add_option("--estimator", fit_flags.estimator,
                    "mmlasso | adaptive-mmlasso | sridge | lslasso | "
                    "adaptive-lslasso");
    sub->add_option("--lambda", fit_flags.lambda,
                    "fixed penalty (omit for cross-validation)");
    sub->add_option("--iota", fit_flags.iota, "fixed adaptive penalty");
    sub->add_option("--gamma", fit_flags.gamma, "fixed S-Ridge penalty");
  };

  CLI::App* fit_cmd = app.add_subcommand("fit", "fit an estimator on CSV data");
  add_fit_options(fit_cmd);
  CLI::App* cv_cmd =
      app.add_subcommand("cv", "cross-validate penalties on CSV data");
  add_fit_options(cv_cmd);

  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "run a Monte Carlo benchmark scenario");
  sim_cmd->add_option("--scenario", sim_flags.scenario, "scenario id 1..6")
      ->check(CLI::Range(1, 6));
  sim_cmd->add_option("--errors", sim_flags.errors, "normal | t3 | t1");
  sim_cmd->add_flag("--contaminate", sim_flags.contaminate,
                    "10% high-leverage contamination of the training sample");
  sim_cmd->add_option("--y0-grid", sim_flags.y0_grid,
                      "outlier sizes for contaminated runs");
  sim_cmd->add_option("--M", sim_flags.replications, "Monte Carlo replications");
  sim_cmd->add_option("--estimator", sim_flags.estimators,
                      "estimators to run (repeatable; default: benchmark set)");

  CLI::App* const_cmd = app.add_subcommand(
      "constants", "print tuning constants and asymptotic constants");
  const_cmd->add_option("--errors", const_flags.errors, "normal | t3 | t1");
  const_cmd->add_option("--sigma", const_flags.sigma, "normal error sd");
  const_cmd->add_option("--b", const_flags.b, "scale quantile");
  const_cmd->add_option("--eff", const_flags.eff, "normal efficiency target");

  try {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
      args = expand_config(args);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitMissingFile;
    }
    std::reverse(args.begin(), args.end());  // CLI11 consumes reversed args
    app.parse(args);
    if (fit_cmd->parsed()) return cmd_fit(common, fit_flags, false);
    if (cv_cmd->parsed()) return cmd_fit(common, fit_flags, true);
    if (sim_cmd->parsed()) return cmd_simulate(common, sim_flags);
    if (const_cmd->parsed()) return cmd_constants(common, const_flags);
    std::cerr << "error: no command given\n";
    return kExitError;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
