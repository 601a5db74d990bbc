#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmlasso/asymptotics.hpp"
#include "mmlasso/dataset.hpp"
#include "mmlasso/estimators.hpp"

namespace mmlasso {

enum class ErrorKind { normal, t3, t1 };

std::string error_kind_name(ErrorKind e);
std::optional<ErrorKind> parse_error_kind(const std::string& name);

//! One of the six benchmark designs: AR-correlated normal carriers (block
//! structure for the p > n designs), sparse coefficient vector, and normal,
//! t(3) or t(1) errors.
struct ScenarioConfig {
  int id = 1;
  ErrorKind errors = ErrorKind::normal;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Eigen::VectorXd beta0;
  double sigma = 1.0;            // error sd in the normal case
  std::vector<std::pair<int, int>> blocks;  // [begin, end) column ranges
  double rho = 0.5;              // within-block AR correlation
  std::uint64_t seed = 0;

  //! Population carrier covariance (block AR).
  Eigen::MatrixXd covariance() const;
  std::vector<int> support() const;
};

//! The canonical configuration for scenario ids 1..6.
ScenarioConfig scenario_config(int id, ErrorKind errors, std::uint64_t seed);

//! Draw independent training and testing samples of size n each.
std::pair<Dataset, Dataset> generate_scenario(const ScenarioConfig& cfg,
                                              std::uint64_t replication);

struct ContaminationSpec {
  double fraction = 0.1;
  std::vector<double> y0_grid = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 5.0, 10.0};
  double leverage = 5.0;  // contaminated carrier is (leverage, 0, ..., 0)
};

//! Replace the first floor(fraction * n) rows of a training sample by
//! high-leverage outliers: response 5 * y0, carrier (5, 0, ..., 0). Test
//! samples are never contaminated.
Dataset contaminate(const Dataset& train, double y0,
                    const ContaminationSpec& spec = {});

struct Metrics {
  double accuracy = 0.0;  // RMSE (normal, t3) or MAD of prediction residuals (t1)
  double fnr = 0.0;
  double fpr = 0.0;
};

Metrics metrics(const FitResult& fit, const Dataset& test,
                const Eigen::VectorXd& beta0, ErrorKind errors);

//! Full Monte Carlo output: per-replication detail plus aggregates. For
//! contaminated runs the aggregate is the maximum over outlier sizes of the
//! replication-averaged metric, and `curve` holds the mean accuracy per y0.
struct ScenarioReport {
  ScenarioConfig scenario;
  bool contaminated = false;
  std::vector<double> y0_grid;
  std::vector<Estimator> estimators;
  int replications = 0;

  // detail[e][rep][y0_index] (a single y0 index 0 for clean runs)
  std::vector<std::vector<std::vector<Metrics>>> detail;
  std::vector<std::vector<std::vector<bool>>> failed;
  std::map<std::string, Metrics> aggregate;       // per estimator name
  std::map<std::string, std::vector<double>> curve;  // mean accuracy per y0
  std::map<std::string, int> failure_count;
};

struct MonteCarloOptions {
  int replications = 100;
  bool contaminated = false;
  ContaminationSpec contamination;
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 = all cores
  PipelineOptions pipeline;
};

ScenarioReport run_monte_carlo(const ScenarioConfig& scenario,
                               const std::vector<Estimator>& estimators,
                               const MonteCarloOptions& opt);

//! Deterministic serializations (used by the CLI and the byte-identity
//! acceptance check).
std::string report_to_csv(const ScenarioReport& report);
std::string report_to_json(const ScenarioReport& report);
std::string curve_to_csv(const ScenarioReport& report);
std::string report_summary_table(const ScenarioReport& report);

}  // namespace mmlasso
