#include "mmlasso/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mmlasso/quadrature.hpp"

namespace mmlasso {

double ErrorDist::pdf(double u) const {
  if (kind == Kind::normal) {
    const double s = param;
    return std::exp(-0.5 * (u / s) * (u / s)) /
           (s * std::sqrt(2.0 * std::numbers::pi));
  }
  const double nu = param;
  const double logc = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                      0.5 * std::log(nu * std::numbers::pi);
  return std::exp(logc - 0.5 * (nu + 1.0) * std::log1p(u * u / nu));
}

double ErrorDist::variance() const {
  if (kind == Kind::normal) return param * param;
  if (param > 2.0) return param / (param - 2.0);
  return std::numeric_limits<double>::infinity();
}

AsymptoticConstants asymptotic_constants(const RhoSpec& rho0,
                                         const RhoSpec& rho1, double b,
                                         const ErrorDist& dist) {
  if (!(b > 0.0 && b < 1.0))
    throw std::invalid_argument("asymptotic_constants: b must be in (0,1)");
  constexpr double tol = 1e-10;

  // E rho0(u/s) = 1 - E[1 - rho0(u/s)], the inner integrand vanishing
  // outside |u| <= c0 s; the truncation is exact there.
  auto e_rho = [&](double s) {
    const double lim = rho0.c * s;
    const double inner = integrate_adaptive(
        [&](double u) { return (1.0 - rho(rho0, u / s)) * dist.pdf(u); }, -lim,
        lim, tol);
    return 1.0 - inner;
  };

  // decreasing in s; bracket around a crude dispersion guess
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (e_rho(hi) > b) {
    hi *= 2.0;
    if (++guard > 200)
      throw std::runtime_error("asymptotic_constants: no upper bracket");
  }
  guard = 0;
  while (e_rho(lo) < b) {
    lo *= 0.5;
    if (++guard > 200)
      throw std::runtime_error("asymptotic_constants: no lower bracket");
  }
  AsymptoticConstants out;
  out.s0 = find_root([&](double s) { return e_rho(s) - b; }, lo, hi, 1e-8);

  const double lim = rho1.c * out.s0;
  out.a = integrate_adaptive(
      [&](double u) {
        const double p = psi(rho1, u / out.s0);
        return p * p * dist.pdf(u);
      },
      -lim, lim, tol);
  out.bconst = integrate_adaptive(
      [&](double u) { return psi_prime(rho1, u / out.s0) * dist.pdf(u); },
      -lim, lim, tol);

  const double var = dist.variance();
  out.efficiency =
      std::isfinite(var)
          ? var * out.bconst * out.bconst / (out.s0 * out.s0 * out.a)
          : std::numeric_limits<double>::quiet_NaN();
  return out;
}

Eigen::MatrixXd oracle_covariance(const AsymptoticConstants& constants,
                                  const Eigen::MatrixXd& sigma_I) {
  if (sigma_I.rows() != sigma_I.cols())
    throw std::invalid_argument("oracle_covariance: matrix must be square");
  if (!sigma_I.isApprox(sigma_I.transpose(), 1e-12))
    throw std::invalid_argument("oracle_covariance: matrix must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_I);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument(
        "oracle_covariance: matrix must be positive definite");
  const Eigen::MatrixXd inv = llt.solve(
      Eigen::MatrixXd::Identity(sigma_I.rows(), sigma_I.cols()));
  const double factor = constants.s0 * constants.s0 * constants.a /
                        (constants.bconst * constants.bconst);
  // symmetrize away the solve's rounding
  Eigen::MatrixXd cov = factor * inv;
  return 0.5 * (cov + cov.transpose());
}

}  // namespace mmlasso
