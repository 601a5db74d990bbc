#include "mmlasso/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mmlasso/rng.hpp"
#include "mmlasso/scale.hpp"

namespace mmlasso {

namespace {

double pearson(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const Eigen::VectorXd uc = u.array() - u.mean();
  const Eigen::VectorXd vc = v.array() - v.mean();
  const double den = std::sqrt(uc.squaredNorm() * vc.squaredNorm());
  if (!(den > 0.0)) return 0.0;
  return uc.dot(vc) / den;
}

std::vector<std::vector<int>> make_folds(Eigen::Index n, int folds,
                                         std::uint64_t seed) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::derive(seed, 0xCF01D5);
  rng.shuffle(order);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(folds));
  for (std::size_t i = 0; i < order.size(); ++i)
    out[i % static_cast<std::size_t>(folds)].push_back(order[i]);
  return out;
}

Dataset subset_rows(const Dataset& ds, const std::vector<int>& rows) {
  Dataset out;
  out.has_intercept = ds.has_intercept;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), ds.p());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = ds.X.row(rows[i]);
    out.y[static_cast<Eigen::Index>(i)] = ds.y[rows[i]];
  }
  return out;
}

}  // namespace

double winsorized_correlation(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("winsorized_correlation: length mismatch");
  if (x.size() < 3)
    throw std::invalid_argument("winsorized_correlation: need n >= 3");
  constexpr double c = 2.0;

  const double sx = norm_mad(x), sy = norm_mad(y);
  if (!(sx > 0.0) || !(sy > 0.0))
    throw std::invalid_argument("winsorized_correlation: zero dispersion");
  const Eigen::VectorXd u = (x.array() - median(x)) / sx;
  const Eigen::VectorXd v = (y.array() - median(y)) / sy;

  // initial estimate from univariate winsorization
  const Eigen::VectorXd ut = u.array().min(c).max(-c);
  const Eigen::VectorXd vt = v.array().min(c).max(-c);
  double r0 = pearson(ut, vt);
  r0 = std::clamp(r0, -0.9999, 0.9999);

  // shrink toward the ellipse z' D^-1 z <= c^2 with D = [[1, r0], [r0, 1]]
  const double det = 1.0 - r0 * r0;
  Eigen::VectorXd ua(u.size()), va(v.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double d2 =
        (u[i] * u[i] - 2.0 * r0 * u[i] * v[i] + v[i] * v[i]) / det;
    const double f = d2 > c * c ? c / std::sqrt(d2) : 1.0;
    ua[i] = f * u[i];
    va[i] = f * v[i];
  }
  return pearson(ua, va);
}

double estimate_lambda_max(const Dataset& ds, const FitResult& init,
                           const MMLassoConfig& cfg) {
  const Eigen::Index n = ds.n();
  const Eigen::Index p = ds.p();
  if (p == 0) throw std::invalid_argument("estimate_lambda_max: no carriers");
  if (!(init.scale > 0.0))
    throw std::invalid_argument("estimate_lambda_max: init scale must be > 0");

  double max_cor = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    try {
      max_cor = std::max(
          max_cor, std::abs(winsorized_correlation(ds.X.col(j), ds.y)));
    } catch (const std::invalid_argument&) {
      // degenerate column contributes nothing to the seed
    }
  }
  double guess = static_cast<double>(n) * max_cor * norm_mad(ds.y) /
                 (init.scale * init.scale);
  if (!(guess > 0.0)) guess = static_cast<double>(n) / (init.scale * init.scale);

  auto all_zero = [&](double lam) {
    FitResult fit = fit_mmlasso(ds, lam, init, cfg);
    return fit.coeffs.isZero(0.0);
  };

  int probes = 0;
  auto probe = [&](double lam) {
    if (++probes > 60)
      throw std::runtime_error(
          "estimate_lambda_max: no bracket within 60 probes");
    return all_zero(lam);
  };

  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
  double lam = guess;
  if (probe(lam))
    hi = lam;
  else
    lo = lam;
  while (std::isnan(hi)) {
    lam *= 2.0;
    if (probe(lam))
      hi = lam;
    else
      lo = lam;
  }
  while (std::isnan(lo)) {
    lam *= 0.5;
    if (!probe(lam))
      lo = lam;
    else
      hi = lam;
  }
  while ((hi - lo) / hi > 0.02) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

PenaltyGrid make_grid(double lambda_max, Eigen::Index p, Eigen::Index n) {
  if (!(lambda_max > 0.0))
    throw std::invalid_argument("make_grid: lambda_max must be > 0");
  constexpr int kCount = 30;
  PenaltyGrid grid;
  grid.includes_zero = p <= n;
  grid.values.resize(kCount);
  if (grid.includes_zero) {
    for (int k = 0; k < kCount; ++k)
      grid.values[static_cast<std::size_t>(k)] =
          lambda_max * static_cast<double>(k) / (kCount - 1);
  } else {
    for (int k = 1; k <= kCount; ++k)
      grid.values[static_cast<std::size_t>(k - 1)] =
          lambda_max * static_cast<double>(k) / kCount;
  }
  return grid;
}

namespace {

// Shared CV driver: fits along the descending grid with warm starts and
// fills per-candidate held-out residuals; `fit` maps (train, lambda, warm
// start) to a FitResult.
template <typename FitFn>
CvResult cv_grid(const Dataset& ds, const PenaltyGrid& grid, int folds,
                 std::uint64_t seed, bool robust_criterion,
                 const Eigen::VectorXd& warm0, FitFn fit) {
  const Eigen::Index n = ds.n();
  if (n < 2 * folds)
    throw std::invalid_argument("cross-validation: need n >= 2 * folds");
  const auto& lambdas = grid.values;
  if (lambdas.empty()) throw std::invalid_argument("cross-validation: empty grid");

  auto fold_idx = make_folds(n, folds, seed);

  const std::size_t L = lambdas.size();
  // held-out residuals, concatenated in fold order, per candidate
  std::vector<std::vector<double>> held(L);
  std::vector<int> failed(L, 0);

  for (int f = 0; f < folds; ++f) {
    std::vector<int> train_rows;
    for (int g = 0; g < folds; ++g)
      if (g != f)
        train_rows.insert(train_rows.end(), fold_idx[static_cast<std::size_t>(g)].begin(),
                          fold_idx[static_cast<std::size_t>(g)].end());
    const Dataset train = subset_rows(ds, train_rows);

    Eigen::VectorXd warm = warm0;
    for (std::size_t k = L; k-- > 0;) {  // descending penalties
      try {
        FitResult fr = fit(train, lambdas[k], warm);
        warm = fr.coeffs;
        for (int row : fold_idx[static_cast<std::size_t>(f)]) {
          held[k].push_back(ds.y[row] - fr.intercept -
                            ds.X.row(row).dot(fr.coeffs));
        }
      } catch (const std::exception&) {
        failed[k] += 1;
      }
    }
  }

  CvResult out;
  out.candidates = lambdas;
  out.criterion.assign(L, std::numeric_limits<double>::quiet_NaN());
  out.failed_folds = failed;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = L;
  for (std::size_t k = 0; k < L; ++k) {
    if (failed[k] > 0) continue;
    Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(
        held[k].data(), static_cast<Eigen::Index>(held[k].size()));
    out.criterion[k] = robust_criterion ? tau_scale(r) : r.squaredNorm();
    // <= keeps the larger (sparser) penalty on ties, grid is ascending
    if (out.criterion[k] <= best) {
      best = out.criterion[k];
      best_idx = k;
    }
  }
  if (best_idx == L)
    throw std::runtime_error("cross-validation: every candidate failed");
  out.selected = lambdas[best_idx];
  out.selected_index = best_idx;
  return out;
}

}  // namespace

CvResult cv_mmlasso(const Dataset& ds, const PenaltyGrid& grid,
                    const FitResult& init, const MMLassoConfig& cfg, int folds,
                    std::uint64_t seed) {
  return cv_grid(ds, grid, folds, seed, /*robust_criterion=*/true, init.coeffs,
                 [&](const Dataset& train, double lam,
                     const Eigen::VectorXd& warm) {
                   return fit_mmlasso_warm(train, lam, init.scale,
                                           init.intercept, warm, cfg);
                 });
}

CvResult cv_lslasso(const Dataset& ds, const PenaltyGrid& grid, int folds,
                    std::uint64_t seed) {
  const Eigen::VectorXd warm0 = Eigen::VectorXd::Zero(ds.p());
  return cv_grid(ds, grid, folds, seed, /*robust_criterion=*/false, warm0,
                 [](const Dataset& train, double lam,
                    const Eigen::VectorXd& warm) {
                   return fit_lslasso_fixed(train, lam, &warm);
                 });
}

double lslasso_lambda_max(const Dataset& ds) {
  const Eigen::Index n = ds.n();
  Eigen::VectorXd y = ds.y;
  Eigen::MatrixXd X = ds.X;
  if (ds.has_intercept) {
    y.array() -= y.mean();
    X.rowwise() -= ds.X.colwise().mean();
  }
  double m = (X.transpose() * y).cwiseAbs().maxCoeff();
  (void)n;
  return m;
}

FitResult fit_lslasso_fixed(const Dataset& ds, double lambda,
                            const Eigen::VectorXd* warm_start) {
  const Eigen::Index n = ds.n();
  FitResult fit;
  fit.lambda = lambda;
  if (ds.has_intercept) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    auto orth = orthogonalize_intercept(ds.X, ones);
    fit.coeffs = solve_weighted_lasso(orth.Xperp, ds.y, lambda, warm_start);
    fit.intercept = recover_intercept(ones, orth.eta, ds.y, fit.coeffs);
  } else {
    fit.coeffs = solve_weighted_lasso(ds.X, ds.y, lambda, warm_start);
    fit.intercept = 0.0;
  }
  const Eigen::VectorXd r = fit_residuals(ds, fit);
  fit.scale = std::sqrt(r.squaredNorm() / static_cast<double>(n));
  fit.converged = true;
  fit.iterations = 1;
  return fit;
}

}  // namespace mmlasso
