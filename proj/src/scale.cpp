#include "mmlasso/scale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mmlasso/quadrature.hpp"

namespace mmlasso {

namespace {

// 1 / qnorm(0.75)
constexpr double kMadConstant = 1.4826022185056018;

double erfc_cdf_tail(double a) {
  // P(|Z| > a) for standard normal
  return std::erfc(a / std::sqrt(2.0));
}

// E min(Z^2, c^2): consistency constant for the truncated-square tau-scale.
double tau_consistency_constant(double c) {
  double inner = integrate_gl(
      [](double z) {
        return z * z * std::exp(-0.5 * z * z) /
               std::sqrt(2.0 * 3.14159265358979323846);
      },
      -c, c, 64);
  return inner + c * c * erfc_cdf_tail(c);
}

}  // namespace

MScaleConfig default_mscale_config() {
  MScaleConfig cfg;
  cfg.rho0 = RhoSpec{RhoFamily::bisquare, tune_for_scale_consistency(0.5)};
  cfg.b = 0.5;
  return cfg;
}

double median(const Eigen::VectorXd& v) {
  const auto n = v.size();
  if (n == 0) throw std::invalid_argument("median: empty input");
  std::vector<double> s(v.data(), v.data() + n);
  std::sort(s.begin(), s.end());
  if (n % 2 == 1) return s[n / 2];
  return 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

double norm_mad(const Eigen::VectorXd& v) {
  const double m = median(v);
  Eigen::VectorXd dev = (v.array() - m).abs();
  return median(dev) * kMadConstant;
}

double mscale(const Eigen::VectorXd& u, const MScaleConfig& cfg) {
  const auto n = u.size();
  if (n == 0) throw std::invalid_argument("mscale: empty input");
  if (!(cfg.b > 0.0 && cfg.b < 1.0))
    throw std::invalid_argument("mscale: b must be in (0,1)");

  Eigen::Index zeros = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (u[i] == 0.0) ++zeros;
  if (static_cast<double>(zeros) >= (1.0 - cfg.b) * static_cast<double>(n))
    return 0.0;

  // Solve on normalized data so the iteration is scale invariant; the seed
  // comes from the MAD, falling back to mean |u| for zero-MAD input.
  double m = norm_mad(u);
  if (!(m > 0.0)) m = u.cwiseAbs().mean();
  Eigen::VectorXd v = u / m;

  auto f = [&](double s) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc += rho(cfg.rho0, v[i] / s);
    return acc / static_cast<double>(n) - cfg.b;
  };

  // f is non-increasing in s with f(0+) > 0 > f(inf); bracket by doubling.
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (f(lo) < 0.0) {
    lo *= 0.5;
    if (++guard > cfg.max_iter)
      throw std::runtime_error("mscale: bracketing failed (lower)");
  }
  guard = 0;
  while (f(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > cfg.max_iter)
      throw std::runtime_error("mscale: bracketing failed (upper)");
  }
  double s = find_root(f, lo, hi, cfg.tol, 1e-14, cfg.max_iter);
  return m * s;
}

double tau_scale(const Eigen::VectorXd& residuals) {
  if (residuals.size() == 0)
    throw std::invalid_argument("tau_scale: empty input");
  constexpr double c_tau = 3.0;
  static const double kappa = tau_consistency_constant(c_tau);
  const double s = norm_mad(residuals);
  if (!(s > 0.0)) return 0.0;
  const auto n = residuals.size();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double z = residuals[i] / s;
    acc += std::min(z * z, c_tau * c_tau);
  }
  return s * std::sqrt(acc / (static_cast<double>(n) * kappa));
}

}  // namespace mmlasso
