#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mmlasso {

//! Regression data: n x p carriers (no materialized intercept column) and
//! response. has_intercept controls whether fits include an unpenalized
//! intercept term.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  bool has_intercept = true;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

//! Result of a single fit, in the coordinates of the dataset it was fit on.
struct FitResult {
  double intercept = 0.0;
  Eigen::VectorXd coeffs;
  double scale = 0.0;   // residual M-scale (the frozen s_n for MM fits)
  double lambda = 0.0;  // penalty level the fit was produced at
  int iterations = 0;
  std::vector<double> objective_trace;
  bool converged = true;
};

inline Eigen::VectorXd fit_residuals(const Dataset& ds, const FitResult& fit) {
  return ds.y - (ds.X * fit.coeffs).array().matrix() -
         Eigen::VectorXd::Constant(ds.n(), fit.intercept);
}

//! Cross-validation outcome over a penalty grid.
struct CvResult {
  std::vector<double> candidates;
  std::vector<double> criterion;  // NaN marks a disqualified candidate
  std::vector<int> failed_folds;  // per candidate
  double selected = 0.0;
  std::size_t selected_index = 0;
};

}  // namespace mmlasso
