#include "mmlasso/kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "mmlasso/quadrature.hpp"

namespace mmlasso {

namespace {

double normal_pdf(double u) {
  return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

// The bisquare and its derivatives vanish (or are constant) outside [-c, c],
// so expectations reduce to integrals of analytic functions on the exact
// support; a fixed Gauss-Legendre rule there is accurate to machine
// precision, well below the 1e-10 target.
constexpr int kQuadNodes = 64;

}  // namespace

double rho(const RhoSpec& spec, double u) {
  const double c = spec.c;
  if (std::abs(u) >= c) return 1.0;
  const double t = 1.0 - (u / c) * (u / c);
  return 1.0 - t * t * t;
}

double psi(const RhoSpec& spec, double u) {
  const double c = spec.c;
  if (std::abs(u) >= c) return 0.0;
  const double t = 1.0 - (u / c) * (u / c);
  return 6.0 * u / (c * c) * t * t;
}

double psi_prime(const RhoSpec& spec, double u) {
  const double c = spec.c;
  if (std::abs(u) >= c) return 0.0;
  const double t = (u / c) * (u / c);
  return 6.0 / (c * c) * (1.0 - t) * (1.0 - 5.0 * t);
}

double weight(const RhoSpec& spec, double u) {
  const double c = spec.c;
  if (std::abs(u) >= c) return 0.0;
  const double t = 1.0 - (u / c) * (u / c);
  return 6.0 / (c * c) * t * t;
}

double normal_rho_expectation(double c) {
  RhoSpec spec{RhoFamily::bisquare, c};
  // E rho = 1 - E[(1 - rho)], and 1 - rho is supported on [-c, c]
  double inner = integrate_gl(
      [&](double u) { return (1.0 - rho(spec, u)) * normal_pdf(u); }, -c, c,
      kQuadNodes);
  return 1.0 - inner;
}

double normal_efficiency(double c) {
  RhoSpec spec{RhoFamily::bisquare, c};
  double a = integrate_gl(
      [&](double u) {
        double p = psi(spec, u);
        return p * p * normal_pdf(u);
      },
      -c, c, kQuadNodes);
  double b = integrate_gl(
      [&](double u) { return psi_prime(spec, u) * normal_pdf(u); }, -c, c,
      kQuadNodes);
  return b * b / a;
}

double tune_for_scale_consistency(double b) {
  if (!(b > 0.0 && b < 1.0))
    throw std::invalid_argument("tune_for_scale_consistency: b must be in (0,1)");
  static std::mutex mu;
  static std::map<double, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(b);
    if (it != cache.end()) return it->second;
  }
  // E rho_c(Z) is decreasing in c, from 1 (c -> 0) to 0 (c -> inf)
  double lo = 1e-3, hi = 1.0;
  while (normal_rho_expectation(hi) > b) {
    hi *= 2.0;
    if (hi > 1e6)
      throw std::runtime_error("tune_for_scale_consistency: no bracket");
  }
  while (normal_rho_expectation(lo) < b) {
    lo /= 2.0;
    if (lo < 1e-12)
      throw std::runtime_error("tune_for_scale_consistency: no bracket");
  }
  double c = find_root(
      [&](double x) { return normal_rho_expectation(x) - b; }, lo, hi, 1e-10);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(b, c);
  return c;
}

double tune_for_efficiency(double eff) {
  if (!(eff > 0.0 && eff < 1.0))
    throw std::invalid_argument("tune_for_efficiency: eff must be in (0,1)");
  static std::mutex mu;
  static std::map<double, double> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(eff);
    if (it != cache.end()) return it->second;
  }
  // efficiency is increasing in c, approaching 1 as c -> inf
  double lo = 0.5, hi = 4.0;
  while (normal_efficiency(hi) < eff) {
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("tune_for_efficiency: no bracket");
  }
  while (normal_efficiency(lo) > eff) {
    lo /= 2.0;
    if (lo < 1e-12) throw std::runtime_error("tune_for_efficiency: no bracket");
  }
  double c = find_root([&](double x) { return normal_efficiency(x) - eff; },
                       lo, hi, 1e-10);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(eff, c);
  return c;
}

}  // namespace mmlasso
