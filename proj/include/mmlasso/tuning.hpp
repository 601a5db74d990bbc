#pragma once

#include <cstdint>
#include <vector>

#include "mmlasso/dataset.hpp"
#include "mmlasso/mmlasso.hpp"

namespace mmlasso {

//! Correlation after bivariate winsorization: both variables are robustly
//! standardized, points are shrunk toward the ellipse of the initial
//! (univariately winsorized) correlation, and the Pearson correlation of the
//! adjusted points is returned. Winsorization constant 2.
double winsorized_correlation(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y);

//! Approximately the smallest lambda at which every slope of the MM-Lasso is
//! zero: a correlation-based initial guess improved by a binary search
//! (factor-2 bracket expansion, then bisection to relative width 0.02). Each
//! probe is an MM-Lasso fit with the scale frozen from init. Returns the
//! bracket's upper end; throws if no bracket is found within 60 probes.
double estimate_lambda_max(const Dataset& ds, const FitResult& init,
                           const MMLassoConfig& cfg);

struct PenaltyGrid {
  std::vector<double> values;  // ascending, equally spaced
  bool includes_zero = true;
};

//! 30 equally spaced penalties on [0, lambda_max] for p <= n and on
//! (0, lambda_max] (zero excluded) for p > n.
PenaltyGrid make_grid(double lambda_max, Eigen::Index p, Eigen::Index n);

//! Robust 5-fold cross-validation of the MM-Lasso penalty. Per candidate
//! the criterion is the tau-scale of the concatenated held-out residuals;
//! fold fits are warm-started along the descending grid with s_n frozen from
//! init. Ties select the larger (sparser) lambda.
CvResult cv_mmlasso(const Dataset& ds, const PenaltyGrid& grid,
                    const FitResult& init, const MMLassoConfig& cfg,
                    int folds = 5, std::uint64_t seed = 0);

//! Non-robust analogue used by the least-squares baselines: unit weights and
//! the sum of squared held-out residuals as the criterion.
CvResult cv_lslasso(const Dataset& ds, const PenaltyGrid& grid, int folds = 5,
                    std::uint64_t seed = 0);

//! Exact all-zero threshold for the unit-weight lasso path.
double lslasso_lambda_max(const Dataset& ds);

//! Unit-weight lasso fit (least-squares loss) at a fixed penalty.
FitResult fit_lslasso_fixed(const Dataset& ds, double lambda,
                            const Eigen::VectorXd* warm_start = nullptr);

}  // namespace mmlasso
