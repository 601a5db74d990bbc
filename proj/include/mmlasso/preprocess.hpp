#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "mmlasso/dataset.hpp"

namespace mmlasso {

//! Record of the robust column standardization, needed to express fitted
//! coefficients in the original coordinates. Degenerate (zero-MAD) columns
//! are dropped from the standardized design and recorded in `dropped`.
struct Standardization {
  Eigen::VectorXd col_center;  // length p (original indexing)
  Eigen::VectorXd col_scale;   // length p; 1 for dropped columns
  std::vector<int> kept;       // original indices of retained columns
  std::vector<int> dropped;    // original indices of dropped columns
  double y_center = 0.0;
  bool has_intercept = true;
  Eigen::Index p_original = 0;
};

//! Center each column by its median and scale by the normalized MAD; center
//! y by its median. Without an intercept no centering is applied. Throws if
//! every column is degenerate.
std::pair<Dataset, Standardization> standardize(const Dataset& ds);

//! Map a fit on standardized data back to original coordinates. Dropped
//! columns get coefficient exactly 0; zeros stay zero.
std::pair<double, Eigen::VectorXd> destandardize(
    double intercept_std, const Eigen::VectorXd& coeffs_std,
    const Standardization& st);

FitResult destandardize(const FitResult& fit_std, const Standardization& st);

}  // namespace mmlasso
