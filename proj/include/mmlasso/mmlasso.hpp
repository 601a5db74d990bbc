#pragma once

#include <cstdint>

#include "mmlasso/dataset.hpp"
#include "mmlasso/kernels.hpp"
#include "mmlasso/pwls.hpp"

namespace mmlasso {

struct MMLassoConfig {
  RhoSpec rho1;          // efficiency kernel (c1); requires c1 >= c0
  double delta = 1e-4;   // relative coefficient-change convergence tolerance
  int max_iter = 500;
  double lambda = 0.0;   // default penalty; fit operations take it explicitly
  LassoOptions lasso;
};

MMLassoConfig default_mmlasso_config();

//! MM-Bridge objective sum rho1(r_i/s_n) + lambda ||slopes||_q^q (intercept
//! unpenalized). Evaluation supports any q > 0; the optimizer handles q = 1.
double mm_objective(const Dataset& ds, double intercept,
                    const Eigen::VectorXd& slopes, double s_n, double lambda,
                    double q, const RhoSpec& rho1);

//! MM-Lasso fit by iteratively reweighted weighted-lasso steps. The residual
//! scale s_n is frozen at init.scale and never updated inside the loop. The
//! iteration starts from the better of the initial estimate and the zero
//! vector, each weighted-lasso subproblem uses the effective penalty
//! lambda * s_n^2, and the recorded objective trace is non-increasing (an
//! increasing step is rejected and the best iterate returned).
FitResult fit_mmlasso(const Dataset& ds, double lambda, const FitResult& init,
                      const MMLassoConfig& cfg);

//! Internal entry point with an explicit warm start (used for the lambda
//! path); s_n stays frozen across the path.
FitResult fit_mmlasso_warm(const Dataset& ds, double lambda, double s_n,
                           double intercept0, const Eigen::VectorXd& slopes0,
                           const MMLassoConfig& cfg);

//! Adaptive MM-Lasso: carriers with pilot coefficient zero are dropped and
//! fixed at zero, the rest are rescaled by |pilot_j|^varsigma, an MM-Lasso
//! with penalty iota is fit on the reweighted carriers, and the coefficients
//! are mapped back. An all-zero pilot yields an intercept-only fit.
FitResult fit_adaptive_mmlasso(const Dataset& ds, double iota,
                               const FitResult& pilot, const FitResult& init,
                               const MMLassoConfig& cfg, double varsigma = 1.0);

//! Contamination probe for the fixed-penalty breakdown bound: replaces the
//! first m rows by gross outliers of the given magnitude, refits at fixed
//! lambda, and reports the realized l1 norm against the bound n / lambda
//! implied by the bounded loss.
struct BreakdownReport {
  double l1_norm = 0.0;
  double bound = 0.0;
  bool within_bound = false;
  FitResult fit;
};

BreakdownReport breakdown_probe(const Dataset& ds, double lambda,
                                int contamination_count, double magnitude,
                                std::uint64_t seed = 0);

}  // namespace mmlasso
