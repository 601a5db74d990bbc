#include "mmlasso/sridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mmlasso/kernels.hpp"
#include "mmlasso/rng.hpp"

namespace mmlasso {

SRidgeConfig default_sridge_config() {
  SRidgeConfig cfg;
  cfg.rho0 = RhoSpec{RhoFamily::bisquare, tune_for_scale_consistency(0.5)};
  return cfg;
}

double sridge_objective(const Dataset& ds, double intercept,
                        const Eigen::VectorXd& slopes, double gamma,
                        const MScaleConfig& scfg) {
  Eigen::VectorXd r = ds.y - ds.X * slopes;
  if (ds.has_intercept) r.array() -= intercept;
  const double s = mscale(r, scfg);
  return static_cast<double>(ds.n()) * s * s + gamma * slopes.squaredNorm();
}

std::vector<double> default_gamma_grid(const Dataset& ds) {
  const double base = norm_mad(ds.y);
  const double mid = static_cast<double>(ds.n()) * base * base /
                     std::max<double>(1.0, static_cast<double>(ds.p()));
  const double lo = 1e-3 * mid, hi = 1e2 * mid;
  constexpr int kCount = 20;
  std::vector<double> grid(kCount);
  for (int i = 0; i < kCount; ++i) {
    const double t = static_cast<double>(i) / (kCount - 1);
    grid[i] = lo * std::pow(hi / lo, t);
  }
  return grid;
}

std::pair<double, Eigen::VectorXd> ridge_wls(const Eigen::MatrixXd& X,
                                             const Eigen::VectorXd& y,
                                             const Eigen::VectorXd& w,
                                             double gamma, bool has_intercept) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const double wsum = w.sum();
  if (!(wsum > 0.0)) throw std::runtime_error("ridge_wls: all weights zero");

  Eigen::VectorXd xm = Eigen::VectorXd::Zero(p);
  double ym = 0.0;
  if (has_intercept) {
    xm = (X.transpose() * w) / wsum;
    ym = w.dot(y) / wsum;
  }
  const Eigen::VectorXd sw = w.array().sqrt();
  Eigen::MatrixXd Xw = (X.rowwise() - xm.transpose()).array().colwise() *
                       sw.array();
  Eigen::VectorXd yw = (y.array() - ym) * sw.array();

  Eigen::VectorXd beta(p);
  if (p <= n || gamma == 0.0) {
    Eigen::MatrixXd A = Xw.transpose() * Xw;
    A.diagonal().array() += gamma;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("ridge_wls: singular system");
    beta = ldlt.solve(Xw.transpose() * yw);
  } else {
    // dual form keeps the cost O(n^2 p) when p > n
    Eigen::MatrixXd K = Xw * Xw.transpose();
    K.diagonal().array() += gamma;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("ridge_wls: singular dual system");
    beta = Xw.transpose() * ldlt.solve(yw);
  }
  if (!beta.allFinite()) throw std::runtime_error("ridge_wls: non-finite fit");
  const double intercept = has_intercept ? ym - xm.dot(beta) : 0.0;
  return {intercept, beta};
}

namespace {

struct StartPoint {
  double intercept;
  Eigen::VectorXd slopes;
};

// One IRLS descent from a start, with objective-guarded step-halving.
FitResult irls_from_start(const Dataset& ds, double gamma,
                          const SRidgeConfig& cfg, const MScaleConfig& scfg,
                          const StartPoint& start) {
  FitResult fit;
  fit.intercept = start.intercept;
  fit.coeffs = start.slopes;
  fit.lambda = gamma;
  fit.converged = false;

  double obj = sridge_objective(ds, fit.intercept, fit.coeffs, gamma, scfg);
  fit.objective_trace.push_back(obj);

  for (int it = 0; it < cfg.max_iter; ++it) {
    fit.iterations = it + 1;
    Eigen::VectorXd r = ds.y - ds.X * fit.coeffs;
    if (ds.has_intercept) r.array() -= fit.intercept;
    const double s = mscale(r, scfg);
    if (!(s > 0.0)) {
      // residuals vanish on a majority of rows; nothing left to improve
      fit.converged = true;
      break;
    }
    Eigen::VectorXd w(ds.n());
    for (Eigen::Index i = 0; i < ds.n(); ++i)
      w[i] = weight(cfg.rho0, r[i] / s);
    if (!(w.sum() > 0.0)) break;

    auto [a_next, b_next] = ridge_wls(ds.X, ds.y, w, gamma, ds.has_intercept);

    // step-halving toward the IRLS target whenever the objective increases
    double t = 1.0;
    double a_new = a_next, obj_new = 0.0;
    Eigen::VectorXd b_new = b_next;
    bool accepted = false;
    for (int h = 0; h < 30; ++h) {
      a_new = fit.intercept + t * (a_next - fit.intercept);
      b_new = fit.coeffs + t * (b_next - fit.coeffs);
      obj_new = sridge_objective(ds, a_new, b_new, gamma, scfg);
      if (obj_new <= obj + 1e-12 * (1.0 + std::abs(obj))) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;

    const double denom = std::max(fit.coeffs.norm(), 1e-12);
    const double rel = (b_new - fit.coeffs).norm() / denom;
    fit.intercept = a_new;
    fit.coeffs = b_new;
    obj = obj_new;
    fit.objective_trace.push_back(obj);
    if (rel < cfg.tol) {
      fit.converged = true;
      break;
    }
  }

  Eigen::VectorXd r = ds.y - ds.X * fit.coeffs;
  if (ds.has_intercept) r.array() -= fit.intercept;
  fit.scale = mscale(r, scfg);
  return fit;
}

}  // namespace

FitResult fit_sridge(const Dataset& ds, double gamma, const SRidgeConfig& cfg) {
  if (gamma < 0.0) throw std::invalid_argument("fit_sridge: negative gamma");
  const Eigen::Index n = ds.n();
  const Eigen::Index p = ds.p();
  if (n < 1) throw std::invalid_argument("fit_sridge: empty dataset");
  const MScaleConfig scfg = cfg.mscale_config();

  std::vector<StartPoint> starts;
  try {
    auto [a0, b0] =
        ridge_wls(ds.X, ds.y, Eigen::VectorXd::Ones(n), gamma, ds.has_intercept);
    starts.push_back({a0, std::move(b0)});
  } catch (const std::runtime_error&) {
  }

  // Subsample starts: minimal affine fits on p+1 rows. When p + 1 >= n that
  // degenerates to the full sample, so half-sample fits keep the diversity.
  Eigen::Index sub = std::min<Eigen::Index>(p + 1, n);
  if (sub >= n) sub = (n + 1) / 2;
  Rng rng = Rng::derive(cfg.seed, 0x535249, static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(p));
  if (sub >= 1 && sub < n) {
    for (int k = 1; k < cfg.n_starts; ++k) {
      for (int attempt = 0; attempt < 10; ++attempt) {
        auto idx = rng.sample_without_replacement(static_cast<int>(n),
                                                  static_cast<int>(sub));
        Eigen::MatrixXd Xs(sub, p);
        Eigen::VectorXd ys(sub);
        for (Eigen::Index i = 0; i < sub; ++i) {
          Xs.row(i) = ds.X.row(idx[static_cast<std::size_t>(i)]);
          ys[i] = ds.y[idx[static_cast<std::size_t>(i)]];
        }
        try {
          auto [a, b] = ridge_wls(Xs, ys, Eigen::VectorXd::Ones(sub), gamma,
                                  ds.has_intercept);
          starts.push_back({a, std::move(b)});
          break;
        } catch (const std::runtime_error&) {
        }
      }
    }
  }
  if (starts.empty())
    throw std::runtime_error("fit_sridge: no usable start point");

  FitResult best;
  double best_obj = std::numeric_limits<double>::infinity();
  double min_start_obj = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    FitResult fit = irls_from_start(ds, gamma, cfg, scfg, start);
    if (fit.objective_trace.empty()) continue;
    min_start_obj = std::min(min_start_obj, fit.objective_trace.front());
    const double obj = fit.objective_trace.back();
    if (std::isfinite(obj) && obj < best_obj) {
      best_obj = obj;
      best = std::move(fit);
    }
  }
  if (!std::isfinite(best_obj))
    throw std::runtime_error("fit_sridge: all starts produced non-finite objectives");
  if (best_obj > min_start_obj + 1e-8 * (1.0 + std::abs(min_start_obj)))
    throw std::runtime_error("fit_sridge: descent guarantee violated");
  return best;
}

CvResult cv_sridge(const Dataset& ds, const SRidgeConfig& cfg) {
  const Eigen::Index n = ds.n();
  if (n < 10) throw std::invalid_argument("cv_sridge: need n >= 10");
  std::vector<double> grid =
      cfg.gamma_grid.empty() ? default_gamma_grid(ds) : cfg.gamma_grid;
  if (grid.empty()) throw std::invalid_argument("cv_sridge: empty grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("cv_sridge: grid must be sorted");

  const int folds = cfg.folds;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng = Rng::derive(cfg.seed, 0xCF01D5);
  shuffle_rng.shuffle(order);

  CvResult out;
  out.candidates = grid;
  out.criterion.assign(grid.size(), 0.0);
  out.failed_folds.assign(grid.size(), 0);

  for (int f = 0; f < folds; ++f) {
    // fold f holds out order[f], order[f+folds], ...
    std::vector<int> test_idx, train_idx;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (static_cast<int>(i % static_cast<std::size_t>(folds)) == f)
        test_idx.push_back(order[i]);
      else
        train_idx.push_back(order[i]);
    }
    Dataset train{Eigen::MatrixXd(static_cast<Eigen::Index>(train_idx.size()),
                                  ds.p()),
                  Eigen::VectorXd(static_cast<Eigen::Index>(train_idx.size())),
                  ds.has_intercept};
    for (std::size_t i = 0; i < train_idx.size(); ++i) {
      train.X.row(static_cast<Eigen::Index>(i)) = ds.X.row(train_idx[i]);
      train.y[static_cast<Eigen::Index>(i)] = ds.y[train_idx[i]];
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      SRidgeConfig fold_cfg = cfg;
      fold_cfg.seed = Rng::derive(cfg.seed, 0xF17, static_cast<std::uint64_t>(f),
                                  static_cast<std::uint64_t>(g))
                          .next_u64();
      try {
        FitResult fit = fit_sridge(train, grid[g], fold_cfg);
        Eigen::VectorXd held(static_cast<Eigen::Index>(test_idx.size()));
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
          const int row = test_idx[i];
          held[static_cast<Eigen::Index>(i)] =
              ds.y[row] - fit.intercept - ds.X.row(row).dot(fit.coeffs);
        }
        out.criterion[g] += tau_scale(held);
      } catch (const std::exception&) {
        out.failed_folds[g] += 1;
      }
    }
  }

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = grid.size();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (out.failed_folds[g] > 0) {
      out.criterion[g] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    // strict < keeps the smallest gamma on ties (ascending grid)
    if (out.criterion[g] < best) {
      best = out.criterion[g];
      best_idx = g;
    }
  }
  if (best_idx == grid.size())
    throw std::runtime_error("cv_sridge: every candidate had a failed fold");
  out.selected = grid[best_idx];
  out.selected_index = best_idx;
  return out;
}

}  // namespace mmlasso
