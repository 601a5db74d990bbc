#include "mmlasso/mmlasso.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmlasso/rng.hpp"
#include "mmlasso/sridge.hpp"

namespace mmlasso {

MMLassoConfig default_mmlasso_config() {
  MMLassoConfig cfg;
  cfg.rho1 = RhoSpec{RhoFamily::bisquare, tune_for_efficiency(0.85)};
  return cfg;
}

double mm_objective(const Dataset& ds, double intercept,
                    const Eigen::VectorXd& slopes, double s_n, double lambda,
                    double q, const RhoSpec& rho1) {
  if (!(s_n > 0.0)) throw std::invalid_argument("mm_objective: s_n must be > 0");
  if (!(q > 0.0)) throw std::invalid_argument("mm_objective: q must be > 0");
  Eigen::VectorXd r = ds.y - ds.X * slopes;
  if (ds.has_intercept) r.array() -= intercept;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) loss += rho(rho1, r[i] / s_n);
  double pen = 0.0;
  for (Eigen::Index j = 0; j < slopes.size(); ++j)
    pen += std::pow(std::abs(slopes[j]), q);
  return loss + lambda * pen;
}

FitResult fit_mmlasso_warm(const Dataset& ds, double lambda, double s_n,
                           double intercept0, const Eigen::VectorXd& slopes0,
                           const MMLassoConfig& cfg) {
  if (!(s_n > 0.0))
    throw std::invalid_argument("fit_mmlasso: initial scale must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("fit_mmlasso: negative lambda");
  const Eigen::Index n = ds.n();
  const Eigen::Index p = ds.p();

  auto objective = [&](double a, const Eigen::VectorXd& b) {
    return mm_objective(ds, a, b, s_n, lambda, 1.0, cfg.rho1);
  };

  // Start from the better of the supplied estimate and the zero vector; the
  // zero comparison keeps the bounded-loss norm bound of the exact minimizer
  // valid for the computed fit.
  double a = intercept0;
  Eigen::VectorXd b = slopes0;
  {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p);
    if (objective(0.0, zero) < objective(a, b)) {
      a = 0.0;
      b = zero;
    }
  }

  FitResult fit;
  fit.lambda = lambda;
  fit.scale = s_n;
  fit.converged = false;

  double obj = objective(a, b);
  fit.objective_trace.push_back(obj);
  double best_obj = obj;
  double best_a = a;
  Eigen::VectorXd best_b = b;

  const double eff_penalty = lambda * s_n * s_n;

  for (int it = 0; it < cfg.max_iter; ++it) {
    Eigen::VectorXd r = ds.y - ds.X * b;
    if (ds.has_intercept) r.array() -= a;
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = weight(cfg.rho1, r[i] / s_n);
    if (!(w.sum() > 0.0)) break;  // every residual beyond c1 * s_n

    fit.iterations = it + 1;
    const Eigen::VectorXd sw = w.array().sqrt();
    const Eigen::VectorXd yw = sw.cwiseProduct(ds.y);

    double a_new = 0.0;
    Eigen::VectorXd b_new;
    if (p == 0) {
      b_new.resize(0);
      if (ds.has_intercept) a_new = w.dot(ds.y) / w.sum();
    } else {
      Eigen::MatrixXd Xw = ds.X.array().colwise() * sw.array();
      if (ds.has_intercept) {
        auto orth = orthogonalize_intercept(Xw, sw);
        b_new = solve_weighted_lasso(orth.Xperp, yw, eff_penalty, &b,
                                     cfg.lasso);
        a_new = recover_intercept(sw, orth.eta, yw, b_new);
      } else {
        b_new = solve_weighted_lasso(Xw, yw, eff_penalty, &b, cfg.lasso);
      }
    }

    const double obj_new = objective(a_new, b_new);
    if (obj_new > obj + 1e-8) {
      // a majorization step cannot increase the objective except through
      // numerical noise, so this is tolerance exhaustion, not divergence
      fit.converged = true;
      break;
    }

    Eigen::VectorXd prev = b;
    const double prev_a = a;
    a = a_new;
    b = std::move(b_new);
    obj = obj_new;
    fit.objective_trace.push_back(obj);
    if (obj < best_obj) {
      best_obj = obj;
      best_a = a;
      best_b = b;
    }

    double dn = (b - prev).squaredNorm();
    double pn = prev.squaredNorm();
    if (ds.has_intercept) {
      dn += (a - prev_a) * (a - prev_a);
      pn += prev_a * prev_a;
    }
    const double rel = std::sqrt(dn) / std::max(std::sqrt(pn), 1e-12);
    if (rel <= cfg.delta) {
      fit.converged = true;
      break;
    }
  }

  fit.intercept = best_a;
  fit.coeffs = std::move(best_b);
  // the final trace entry may exceed best_obj only by rejected-step noise;
  // report the best iterate
  if (fit.objective_trace.back() > best_obj) {
    fit.objective_trace.push_back(best_obj);
  }
  return fit;
}

FitResult fit_mmlasso(const Dataset& ds, double lambda, const FitResult& init,
                      const MMLassoConfig& cfg) {
  Eigen::VectorXd slopes0 = init.coeffs;
  if (slopes0.size() != ds.p())
    throw std::invalid_argument("fit_mmlasso: init coefficient length mismatch");
  return fit_mmlasso_warm(ds, lambda, init.scale, init.intercept, slopes0, cfg);
}

FitResult fit_adaptive_mmlasso(const Dataset& ds, double iota,
                               const FitResult& pilot, const FitResult& init,
                               const MMLassoConfig& cfg, double varsigma) {
  if (varsigma < 0.0)
    throw std::invalid_argument("fit_adaptive_mmlasso: negative varsigma");
  if (pilot.coeffs.size() != ds.p() || init.coeffs.size() != ds.p())
    throw std::invalid_argument("fit_adaptive_mmlasso: length mismatch");
  const Eigen::Index p = ds.p();

  std::vector<Eigen::Index> survivors;
  for (Eigen::Index j = 0; j < p; ++j)
    if (pilot.coeffs[j] != 0.0) survivors.push_back(j);

  Dataset reduced;
  reduced.has_intercept = ds.has_intercept;
  reduced.y = ds.y;
  reduced.X.resize(ds.n(), static_cast<Eigen::Index>(survivors.size()));
  Eigen::VectorXd carrier_weight(static_cast<Eigen::Index>(survivors.size()));
  Eigen::VectorXd start(static_cast<Eigen::Index>(survivors.size()));
  for (std::size_t k = 0; k < survivors.size(); ++k) {
    const Eigen::Index j = survivors[k];
    const double wj = std::pow(std::abs(pilot.coeffs[j]), varsigma);
    carrier_weight[static_cast<Eigen::Index>(k)] = wj;
    reduced.X.col(static_cast<Eigen::Index>(k)) = ds.X.col(j) * wj;
    start[static_cast<Eigen::Index>(k)] = init.coeffs[j] / wj;
  }

  FitResult inner = fit_mmlasso_warm(reduced, iota, init.scale, init.intercept,
                                     start, cfg);

  FitResult out;
  out.intercept = inner.intercept;
  out.coeffs = Eigen::VectorXd::Zero(p);
  for (std::size_t k = 0; k < survivors.size(); ++k)
    out.coeffs[survivors[k]] =
        inner.coeffs[static_cast<Eigen::Index>(k)] *
        carrier_weight[static_cast<Eigen::Index>(k)];
  out.scale = inner.scale;
  out.lambda = iota;
  out.iterations = inner.iterations;
  out.objective_trace = inner.objective_trace;
  out.converged = inner.converged;
  return out;
}

BreakdownReport breakdown_probe(const Dataset& ds, double lambda,
                                int contamination_count, double magnitude,
                                std::uint64_t seed) {
  const Eigen::Index n = ds.n();
  if (contamination_count < 0 || contamination_count >= n)
    throw std::invalid_argument("breakdown_probe: need 0 <= m <= n-1");
  if (!(lambda > 0.0))
    throw std::invalid_argument("breakdown_probe: lambda must be > 0");

  Dataset bad = ds;
  Rng rng = Rng::derive(seed, 0xB4EA4);
  for (int i = 0; i < contamination_count; ++i) {
    bad.X.row(i).setZero();
    // distinct magnitudes of the requested order keep the contaminated rows
    // off a common hyperplane (an exact interpolant would zero the M-scale)
    bad.X(i, 0) = magnitude * (1.0 + rng.uniform());
    bad.y[i] = magnitude * (1.0 + rng.uniform());
  }

  SRidgeConfig scfg = default_sridge_config();
  scfg.seed = seed;
  const std::vector<double> grid = default_gamma_grid(bad);
  const double gamma = grid[grid.size() / 2];
  FitResult init = fit_sridge(bad, gamma, scfg);

  MMLassoConfig mcfg = default_mmlasso_config();
  FitResult fit = fit_mmlasso(bad, lambda, init, mcfg);

  BreakdownReport report;
  report.fit = fit;
  report.l1_norm = fit.coeffs.lpNorm<1>();
  report.bound = static_cast<double>(n) / lambda;
  report.within_bound = report.l1_norm <= report.bound + 1e-9;
  return report;
}

}  // namespace mmlasso
