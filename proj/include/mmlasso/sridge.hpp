#pragma once

#include <cstdint>
#include <vector>

#include "mmlasso/dataset.hpp"
#include "mmlasso/scale.hpp"

namespace mmlasso {

struct SRidgeConfig {
  RhoSpec rho0;               // scale kernel (c0)
  double b = 0.5;
  std::vector<double> gamma_grid;  // empty -> default_gamma_grid(ds)
  int n_starts = 20;
  double tol = 1e-5;          // relative coefficient change ending the IRLS
  int max_iter = 100;
  std::uint64_t seed = 0;
  int folds = 5;

  MScaleConfig mscale_config() const {
    MScaleConfig cfg;
    cfg.rho0 = rho0;
    cfg.b = b;
    return cfg;
  }
};

SRidgeConfig default_sridge_config();

//! S-Ridge objective n s_n^2(r) + gamma ||slopes||_2^2 (intercept
//! unpenalized).
double sridge_objective(const Dataset& ds, double intercept,
                        const Eigen::VectorXd& slopes, double gamma,
                        const MScaleConfig& scfg);

//! 20 log-spaced penalties spanning [1e-3, 1e2] * (n * norm_mad(y)^2 / p).
std::vector<double> default_gamma_grid(const Dataset& ds);

//! Multi-start IRLS minimization of the S-Ridge objective. Starts are the
//! full-data ridge least-squares fit plus ridge fits on random subsamples;
//! every IRLS step is objective-guarded by step-halving, so the returned
//! objective never exceeds the objective at any start point.
FitResult fit_sridge(const Dataset& ds, double gamma, const SRidgeConfig& cfg);

//! Robust 5-fold cross-validation of gamma: per candidate, sum over folds of
//! the tau-scale of held-out residuals. Ties select the smallest gamma.
CvResult cv_sridge(const Dataset& ds, const SRidgeConfig& cfg);

//! Weighted ridge least squares with unpenalized intercept. Solved in primal
//! (p x p) form for p <= n and in dual (n x n) form otherwise.
std::pair<double, Eigen::VectorXd> ridge_wls(const Eigen::MatrixXd& X,
                                             const Eigen::VectorXd& y,
                                             const Eigen::VectorXd& w,
                                             double gamma, bool has_intercept);

}  // namespace mmlasso
