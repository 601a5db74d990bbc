#pragma once

#include <Eigen/Dense>

#include "mmlasso/kernels.hpp"

namespace mmlasso {

struct MScaleConfig {
  RhoSpec rho0;           // scale kernel (c0)
  double b = 0.5;         // scale quantile; 0.5 gives maximal breakdown
  double tol = 1e-10;     // tolerance on the defining-equation residual
  int max_iter = 200;
};

//! Default max-breakdown configuration: bisquare c0 tuned for consistency at
//! the normal, b = 0.5.
MScaleConfig default_mscale_config();

//! M-estimate of scale: the s > 0 with (1/n) sum rho0(u_i/s) = b, or 0 when
//! at least (1-b)n entries are exactly zero. Scale equivariant.
double mscale(const Eigen::VectorXd& u, const MScaleConfig& cfg);

//! Lower-midpoint-averaged sample median.
double median(const Eigen::VectorXd& v);

//! Normalized median absolute deviation: median(|v - median(v)|) / qnorm(0.75).
//! May return 0 for degenerate input.
double norm_mad(const Eigen::VectorXd& v);

//! Efficient robust residual scale built on the MAD:
//! tau^2 = s^2/(n kappa) * sum min((r_i/s)^2, c_tau^2) with s = norm_mad(r),
//! c_tau = 3 and kappa the normal consistency constant. Used as the
//! cross-validation criterion.
double tau_scale(const Eigen::VectorXd& residuals);

}  // namespace mmlasso
