#include "mmlasso/simbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mmlasso/parallel.hpp"
#include "mmlasso/rng.hpp"
#include "mmlasso/scale.hpp"

namespace mmlasso {

std::string error_kind_name(ErrorKind e) {
  switch (e) {
    case ErrorKind::normal: return "normal";
    case ErrorKind::t3: return "t3";
    case ErrorKind::t1: return "t1";
  }
  return "unknown";
}

std::optional<ErrorKind> parse_error_kind(const std::string& name) {
  if (name == "normal") return ErrorKind::normal;
  if (name == "t3") return ErrorKind::t3;
  if (name == "t1") return ErrorKind::t1;
  return std::nullopt;
}

Eigen::MatrixXd ScenarioConfig::covariance() const {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(p, p);
  for (const auto& [begin, end] : blocks) {
    for (int i = begin; i < end; ++i)
      for (int j = begin; j < end; ++j)
        sigma(i, j) = std::pow(rho, std::abs(i - j));
  }
  return sigma;
}

std::vector<int> ScenarioConfig::support() const {
  std::vector<int> s;
  for (Eigen::Index j = 0; j < beta0.size(); ++j)
    if (beta0[j] != 0.0) s.push_back(static_cast<int>(j));
  return s;
}

ScenarioConfig scenario_config(int id, ErrorKind errors, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.id = id;
  cfg.errors = errors;
  cfg.seed = seed;
  auto beta_15 = [](Eigen::Index p) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
    for (int j = 0; j < 5; ++j) b[j] = 2.5;
    for (int j = 5; j < 10; ++j) b[j] = 1.5;
    for (int j = 10; j < 15; ++j) b[j] = 0.5;
    return b;
  };
  switch (id) {
    case 1:
      cfg.n = 40;
      cfg.p = 8;
      cfg.beta0 = Eigen::VectorXd::Zero(8);
      cfg.beta0[0] = 3.0;
      cfg.beta0[1] = 1.5;
      cfg.beta0[5] = 2.0;
      cfg.sigma = 3.0;
      cfg.rho = 0.5;
      cfg.blocks = {{0, 8}};
      break;
    case 2:
      cfg = scenario_config(1, errors, seed);
      cfg.id = 2;
      cfg.n = 60;
      cfg.sigma = 1.0;
      break;
    case 3:
      cfg.n = 100;
      cfg.p = 30;
      cfg.beta0 = beta_15(30);
      cfg.sigma = 1.5;
      cfg.rho = 0.95;
      cfg.blocks = {{0, 30}};
      break;
    case 4:
      cfg.n = 100;
      cfg.p = 200;
      cfg.beta0 = beta_15(200);
      cfg.sigma = 1.5;
      cfg.rho = 0.5;
      cfg.blocks = {{0, 15}, {15, 200}};
      break;
    case 5:
      cfg = scenario_config(4, errors, seed);
      cfg.id = 5;
      cfg.rho = 0.95;
      break;
    case 6: {
      cfg.n = 50;
      cfg.p = 250;
      cfg.beta0 = Eigen::VectorXd::Zero(250);
      cfg.beta0[0] = 3.0;
      cfg.beta0[1] = 1.5;
      cfg.beta0[5] = 2.0;
      cfg.sigma = 3.0;
      cfg.rho = 0.5;
      cfg.blocks = {{0, 250}};
      break;
    }
    default:
      throw std::invalid_argument("scenario_config: id must be in 1..6");
  }
  return cfg;
}

namespace {

double draw_error(Rng& rng, ErrorKind kind, double sigma) {
  switch (kind) {
    case ErrorKind::normal: return sigma * rng.normal();
    case ErrorKind::t3: return rng.student_t(3);
    case ErrorKind::t1: return rng.student_t(1);
  }
  return 0.0;
}

Dataset draw_sample(const ScenarioConfig& cfg, const Eigen::MatrixXd& chol,
                    Rng& rng) {
  Dataset ds;
  ds.has_intercept = true;
  ds.X.resize(cfg.n, cfg.p);
  ds.y.resize(cfg.n);
  Eigen::VectorXd z(cfg.p);
  for (Eigen::Index i = 0; i < cfg.n; ++i) {
    for (Eigen::Index j = 0; j < cfg.p; ++j) z[j] = rng.normal();
    ds.X.row(i) = (chol * z).transpose();
  }
  for (Eigen::Index i = 0; i < cfg.n; ++i)
    ds.y[i] = ds.X.row(i).dot(cfg.beta0) + draw_error(rng, cfg.errors, cfg.sigma);
  return ds;
}

}  // namespace

std::pair<Dataset, Dataset> generate_scenario(const ScenarioConfig& cfg,
                                              std::uint64_t replication) {
  const Eigen::MatrixXd sigma = cfg.covariance();
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("generate_scenario: covariance not PD");
  const Eigen::MatrixXd chol = llt.matrixL();
  Rng rng = Rng::derive(cfg.seed, static_cast<std::uint64_t>(cfg.id),
                        replication);
  Dataset train = draw_sample(cfg, chol, rng);
  Dataset test = draw_sample(cfg, chol, rng);
  return {std::move(train), std::move(test)};
}

Dataset contaminate(const Dataset& train, double y0,
                    const ContaminationSpec& spec) {
  if (y0 < 0.0) throw std::invalid_argument("contaminate: y0 must be >= 0");
  Dataset out = train;
  const auto m = static_cast<Eigen::Index>(
      spec.fraction * static_cast<double>(train.n()));
  for (Eigen::Index i = 0; i < m; ++i) {
    out.X.row(i).setZero();
    out.X(i, 0) = spec.leverage;
    out.y[i] = spec.leverage * y0;
  }
  return out;
}

Metrics metrics(const FitResult& fit, const Dataset& test,
                const Eigen::VectorXd& beta0, ErrorKind errors) {
  if (test.n() == 0) throw std::invalid_argument("metrics: empty test set");
  const Eigen::VectorXd r = fit_residuals(test, fit);
  Metrics out;
  if (errors == ErrorKind::t1) {
    out.accuracy = median(r.cwiseAbs());
  } else {
    out.accuracy = std::sqrt(r.squaredNorm() / static_cast<double>(test.n()));
  }
  int active = 0, inactive = 0, missed = 0, spurious = 0;
  for (Eigen::Index j = 0; j < beta0.size(); ++j) {
    if (beta0[j] != 0.0) {
      ++active;
      if (fit.coeffs[j] == 0.0) ++missed;
    } else {
      ++inactive;
      if (fit.coeffs[j] != 0.0) ++spurious;
    }
  }
  out.fnr = active > 0 ? static_cast<double>(missed) / active : 0.0;
  out.fpr = inactive > 0 ? static_cast<double>(spurious) / inactive : 0.0;
  return out;
}

ScenarioReport run_monte_carlo(const ScenarioConfig& scenario,
                               const std::vector<Estimator>& estimators,
                               const MonteCarloOptions& opt) {
  if (opt.replications < 1)
    throw std::invalid_argument("run_monte_carlo: need replications >= 1");
  ScenarioReport report;
  report.scenario = scenario;
  report.contaminated = opt.contaminated;
  report.y0_grid =
      opt.contaminated ? opt.contamination.y0_grid : std::vector<double>{0.0};
  report.estimators = estimators;
  report.replications = opt.replications;

  const std::size_t E = estimators.size();
  const std::size_t M = static_cast<std::size_t>(opt.replications);
  const std::size_t Y = report.y0_grid.size();
  report.detail.assign(E, std::vector<std::vector<Metrics>>(
                              M, std::vector<Metrics>(Y)));
  report.failed.assign(
      E, std::vector<std::vector<bool>>(M, std::vector<bool>(Y, false)));

  parallel_for(M, opt.jobs, [&](std::size_t rep) {
    auto [train, test] = generate_scenario(scenario, rep);
    for (std::size_t yi = 0; yi < Y; ++yi) {
      const Dataset fit_train =
          opt.contaminated
              ? contaminate(train, report.y0_grid[yi], opt.contamination)
              : train;
      for (std::size_t e = 0; e < E; ++e) {
        PipelineOptions popt = opt.pipeline;
        popt.seed = Rng::derive(opt.seed, static_cast<std::uint64_t>(rep),
                                static_cast<std::uint64_t>(yi),
                                static_cast<std::uint64_t>(e))
                        .next_u64();
        popt.oracle_support = scenario.support();
        try {
          PipelineResult res = run_estimator(estimators[e], fit_train, popt);
          report.detail[e][rep][yi] =
              metrics(res.fit, test, scenario.beta0, scenario.errors);
        } catch (const std::exception&) {
          report.failed[e][rep][yi] = true;
        }
      }
    }
  });

  // deterministic reduction in replication order
  for (std::size_t e = 0; e < E; ++e) {
    const std::string name = estimator_name(estimators[e]);
    int failures = 0;
    std::vector<double> mean_acc(Y, 0.0), mean_fnr(Y, 0.0), mean_fpr(Y, 0.0);
    std::vector<int> counts(Y, 0);
    for (std::size_t yi = 0; yi < Y; ++yi) {
      for (std::size_t rep = 0; rep < M; ++rep) {
        if (report.failed[e][rep][yi]) {
          ++failures;
          continue;
        }
        const Metrics& m = report.detail[e][rep][yi];
        mean_acc[yi] += m.accuracy;
        mean_fnr[yi] += m.fnr;
        mean_fpr[yi] += m.fpr;
        counts[yi] += 1;
      }
      if (counts[yi] > 0) {
        mean_acc[yi] /= counts[yi];
        mean_fnr[yi] /= counts[yi];
        mean_fpr[yi] /= counts[yi];
      } else {
        mean_acc[yi] = std::numeric_limits<double>::quiet_NaN();
        mean_fnr[yi] = std::numeric_limits<double>::quiet_NaN();
        mean_fpr[yi] = std::numeric_limits<double>::quiet_NaN();
      }
    }
    Metrics agg;
    agg.accuracy = *std::max_element(mean_acc.begin(), mean_acc.end());
    agg.fnr = *std::max_element(mean_fnr.begin(), mean_fnr.end());
    agg.fpr = *std::max_element(mean_fpr.begin(), mean_fpr.end());
    report.aggregate[name] = agg;
    report.curve[name] = mean_acc;
    report.failure_count[name] = failures;
  }
  return report;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

const char* accuracy_label(const ScenarioReport& report) {
  if (report.scenario.errors == ErrorKind::t1) return "mad";
  return report.contaminated ? "max_rmse" : "rmse";
}

}  // namespace

std::string report_to_csv(const ScenarioReport& report) {
  std::ostringstream os;
  os << "scenario,errors,contaminated,estimator,metric,value\n";
  const std::string prefix = std::to_string(report.scenario.id) + "," +
                             error_kind_name(report.scenario.errors) + "," +
                             (report.contaminated ? "1" : "0") + ",";
  for (Estimator e : report.estimators) {
    const std::string name = estimator_name(e);
    const Metrics& m = report.aggregate.at(name);
    os << prefix << name << "," << accuracy_label(report) << ","
       << format_double(m.accuracy) << "\n";
    os << prefix << name << ",fnr," << format_double(m.fnr) << "\n";
    os << prefix << name << ",fpr," << format_double(m.fpr) << "\n";
    os << prefix << name << ",failures,"
       << report.failure_count.at(name) << "\n";
  }
  return os.str();
}

std::string curve_to_csv(const ScenarioReport& report) {
  std::ostringstream os;
  os << "y0,estimator,mean_accuracy\n";
  for (std::size_t yi = 0; yi < report.y0_grid.size(); ++yi) {
    for (Estimator e : report.estimators) {
      const std::string name = estimator_name(e);
      os << format_double(report.y0_grid[yi]) << "," << name << ","
         << format_double(report.curve.at(name)[yi]) << "\n";
    }
  }
  return os.str();
}

std::string report_to_json(const ScenarioReport& report) {
  nlohmann::json j;
  j["scenario"] = report.scenario.id;
  j["errors"] = error_kind_name(report.scenario.errors);
  j["contaminated"] = report.contaminated;
  j["replications"] = report.replications;
  j["n"] = report.scenario.n;
  j["p"] = report.scenario.p;
  j["y0_grid"] = report.y0_grid;
  nlohmann::json agg = nlohmann::json::object();
  nlohmann::json detail = nlohmann::json::object();
  for (std::size_t e = 0; e < report.estimators.size(); ++e) {
    const std::string name = estimator_name(report.estimators[e]);
    const Metrics& m = report.aggregate.at(name);
    agg[name] = {{"accuracy", m.accuracy},
                 {"fnr", m.fnr},
                 {"fpr", m.fpr},
                 {"failures", report.failure_count.at(name)},
                 {"curve", report.curve.at(name)}};
    nlohmann::json reps = nlohmann::json::array();
    for (std::size_t rep = 0; rep < report.detail[e].size(); ++rep) {
      nlohmann::json per_y0 = nlohmann::json::array();
      for (std::size_t yi = 0; yi < report.detail[e][rep].size(); ++yi) {
        if (report.failed[e][rep][yi]) {
          per_y0.push_back(nullptr);
        } else {
          const Metrics& d = report.detail[e][rep][yi];
          per_y0.push_back({{"accuracy", d.accuracy},
                            {"fnr", d.fnr},
                            {"fpr", d.fpr}});
        }
      }
      reps.push_back(per_y0);
    }
    detail[name] = reps;
  }
  j["aggregate"] = agg;
  j["detail"] = detail;
  return j.dump(2) + "\n";
}

std::string report_summary_table(const ScenarioReport& report) {
  std::ostringstream os;
  os << "Scenario " << report.scenario.id << "  (n,p)=(" << report.scenario.n
     << "," << report.scenario.p << ")  errors="
     << error_kind_name(report.scenario.errors)
     << (report.contaminated ? "  10% contaminated" : "") << "  M="
     << report.replications << "\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-22s %10s %8s %8s %9s\n", "estimator",
                accuracy_label(report), "FNR", "FPR", "failures");
  os << line;
  for (Estimator e : report.estimators) {
    const std::string name = estimator_name(e);
    const Metrics& m = report.aggregate.at(name);
    std::snprintf(line, sizeof(line), "%-22s %10.3f %8.3f %8.3f %9d\n",
                  name.c_str(), m.accuracy, m.fnr, m.fpr,
                  report.failure_count.at(name));
    os << line;
  }
  return os.str();
}

}  // namespace mmlasso
