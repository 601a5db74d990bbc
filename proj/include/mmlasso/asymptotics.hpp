#pragma once

#include <Eigen/Dense>

#include "mmlasso/kernels.hpp"

namespace mmlasso {

//! Error laws supported by the simulation designs.
struct ErrorDist {
  enum class Kind { normal, student_t } kind = Kind::normal;
  double param = 1.0;  // sigma for normal, degrees of freedom for t

  static ErrorDist normal(double sigma) { return {Kind::normal, sigma}; }
  static ErrorDist student_t(double nu) { return {Kind::student_t, nu}; }

  double pdf(double u) const;
  //! Variance, or +inf when it does not exist.
  double variance() const;
};

//! The constants of the estimator's limiting normal law: the asymptotic
//! residual scale s0 solving E rho0(u/s) = b, a = E psi1^2(u/s0),
//! bconst = E psi1'(u/s0), and the efficiency relative to least squares
//! (NaN when the error law has no finite variance).
struct AsymptoticConstants {
  double s0 = 0.0;
  double a = 0.0;
  double bconst = 0.0;
  double efficiency = 0.0;
};

AsymptoticConstants asymptotic_constants(const RhoSpec& rho0,
                                         const RhoSpec& rho1, double b,
                                         const ErrorDist& dist);

//! Oracle covariance s0^2 (a / bconst^2) Sigma_I^{-1} of the active-block
//! limiting law; Sigma_I = E x_I x_I' must be symmetric positive definite.
Eigen::MatrixXd oracle_covariance(const AsymptoticConstants& constants,
                                  const Eigen::MatrixXd& sigma_I);

}  // namespace mmlasso
