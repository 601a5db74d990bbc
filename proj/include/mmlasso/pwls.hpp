#pragma once

#include <Eigen/Dense>

namespace mmlasso {

//! Decomposition of a weighted design against its weighted intercept column
//! k* (the vector of square-root weights): eta_j = k*'x*(j) / ||k*||^2 and
//! x*perp(j) = x*(j) - eta_j k*, orthogonal to k*.
struct InterceptOrthogonalization {
  Eigen::VectorXd eta;     // p
  Eigen::MatrixXd Xperp;   // n x p
  double kstar_sqnorm = 0.0;
};

InterceptOrthogonalization orthogonalize_intercept(
    const Eigen::MatrixXd& Xw, const Eigen::VectorXd& kstar);

struct LassoOptions {
  double kkt_tol = 1e-6;    // certificate tolerance, standardized units
  double sweep_tol = 1e-9;  // sup-norm coefficient change ending a sweep phase
  int max_sweeps = 10000;
};

//! Minimize 0.5 ||y - X beta||^2 + penalty ||beta||_1 by cyclic coordinate
//! descent with soft-thresholding. The returned solution carries a KKT
//! certificate: |x_j'r - penalty sign(beta_j)| <= kkt_tol (1 + penalty) for
//! active j and |x_j'r| <= penalty + kkt_tol for inactive j. Throws if the
//! certificate cannot be met within max_sweeps.
Eigen::VectorXd solve_weighted_lasso(const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& y, double penalty,
                                     const Eigen::VectorXd* warm_start = nullptr,
                                     const LassoOptions& opt = {});

//! Largest normalized KKT violation of beta for the problem above (0 means
//! exact). Active coordinates contribute
//! |x_j'r - penalty sign(beta_j)| / (1 + penalty), inactive ones
//! |x_j'r| - penalty; the certificate is gap <= kkt_tol.
double lasso_kkt_gap(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     double penalty, const Eigen::VectorXd& beta);

//! Solve for the unpenalized intercept direction:
//! beta_1 = k*'y / ||k*||^2 - sum_j eta_j beta_j.
double recover_intercept(const Eigen::VectorXd& kstar,
                         const Eigen::VectorXd& eta, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& slopes);

}  // namespace mmlasso
