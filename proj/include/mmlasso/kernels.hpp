#pragma once

namespace mmlasso {

enum class RhoFamily { bisquare };

//! A bounded rho-function, normalized so that rho(u) = 1 for |u| >= c.
//! Two instances drive the estimators: the scale kernel (constant c0, tuned
//! so the M-scale is consistent for the normal standard deviation) and the
//! efficiency kernel (constant c1, tuned for a target normal efficiency).
struct RhoSpec {
  RhoFamily family = RhoFamily::bisquare;
  double c = 1.0;  // tuning constant, > 0
};

//! rho(u) in [0, 1]; even, non-decreasing in |u|, rho(0) = 0.
double rho(const RhoSpec& spec, double u);

//! psi = rho'; odd, redescending (zero for |u| >= c).
double psi(const RhoSpec& spec, double u);

//! psi' = rho''; continuous, eventually zero.
double psi_prime(const RhoSpec& spec, double u);

//! w(u) = psi(u)/u with w(0) = psi'(0); non-negative, non-increasing in |u|.
double weight(const RhoSpec& spec, double u);

//! E_Phi rho_c(Z) for a standard normal Z.
double normal_rho_expectation(double c);

//! Normal asymptotic efficiency of an MM-estimator using the bisquare with
//! constant c: (E psi')^2 / E psi^2 at the standard normal.
double normal_efficiency(double c);

//! Solve E_Phi rho_c(Z) = b for c. Results are cached per b.
double tune_for_scale_consistency(double b);

//! Solve normal_efficiency(c) = eff for c. Results are cached per eff.
double tune_for_efficiency(double eff);

}  // namespace mmlasso
