#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmlasso/dataset.hpp"
#include "mmlasso/mmlasso.hpp"
#include "mmlasso/sridge.hpp"
#include "mmlasso/tuning.hpp"

namespace mmlasso {

enum class Estimator {
  mmlasso,
  adaptive_mmlasso,
  sridge,
  lslasso,
  adaptive_lslasso,
  oracle_ls,
  oracle_mm,
};

std::string estimator_name(Estimator e);
std::optional<Estimator> parse_estimator(const std::string& name);

//! End-to-end options for fitting on raw (unstandardized) data. Penalties
//! left unset are chosen by the estimator's cross-validation scheme.
struct PipelineOptions {
  double b = 0.5;              // scale quantile
  double efficiency = 0.85;    // normal efficiency target for rho1
  double varsigma = 1.0;       // adaptive carrier-weight exponent
  std::optional<double> gamma;   // S-Ridge penalty
  std::optional<double> lambda;  // MM-Lasso / LS-Lasso penalty
  std::optional<double> iota;    // adaptive penalty
  int folds = 5;
  int sridge_starts = 20;
  std::uint64_t seed = 0;
  std::vector<int> oracle_support;  // required by the oracle estimators

  SRidgeConfig sridge_config() const;
  MMLassoConfig mmlasso_config() const;
};

//! A fit in original coordinates together with the selected penalties.
struct PipelineResult {
  FitResult fit;
  double gamma = 0.0;
  double lambda = 0.0;  // lambda for MM-/LS-Lasso, iota for adaptive variants
  bool cv_used = false;
};

PipelineResult run_estimator(Estimator which, const Dataset& ds,
                             const PipelineOptions& opt);

//! Least-squares fit on the support columns only (the infeasible benchmark).
FitResult fit_oracle(const Dataset& ds, const std::vector<int>& support,
                     bool robust, const PipelineOptions& opt = {});

}  // namespace mmlasso
