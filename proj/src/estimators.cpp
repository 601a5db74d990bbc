#include "mmlasso/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "mmlasso/preprocess.hpp"
#include "mmlasso/rng.hpp"

namespace mmlasso {

std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::mmlasso: return "mmlasso";
    case Estimator::adaptive_mmlasso: return "adaptive-mmlasso";
    case Estimator::sridge: return "sridge";
    case Estimator::lslasso: return "lslasso";
    case Estimator::adaptive_lslasso: return "adaptive-lslasso";
    case Estimator::oracle_ls: return "oracle-ls";
    case Estimator::oracle_mm: return "oracle-mm";
  }
  return "unknown";
}

std::optional<Estimator> parse_estimator(const std::string& name) {
  for (Estimator e :
       {Estimator::mmlasso, Estimator::adaptive_mmlasso, Estimator::sridge,
        Estimator::lslasso, Estimator::adaptive_lslasso, Estimator::oracle_ls,
        Estimator::oracle_mm}) {
    if (estimator_name(e) == name) return e;
  }
  return std::nullopt;
}

SRidgeConfig PipelineOptions::sridge_config() const {
  SRidgeConfig cfg = default_sridge_config();
  cfg.rho0 = RhoSpec{RhoFamily::bisquare, tune_for_scale_consistency(b)};
  cfg.b = b;
  cfg.n_starts = sridge_starts;
  cfg.folds = folds;
  cfg.seed = seed;
  return cfg;
}

MMLassoConfig PipelineOptions::mmlasso_config() const {
  MMLassoConfig cfg = default_mmlasso_config();
  cfg.rho1 = RhoSpec{RhoFamily::bisquare, tune_for_efficiency(efficiency)};
  return cfg;
}

namespace {

// S-Ridge initial estimate on standardized data, with CV for gamma unless a
// fixed value was supplied. Returns (fit, gamma).
std::pair<FitResult, double> sridge_init(const Dataset& std_ds,
                                         const PipelineOptions& opt) {
  SRidgeConfig cfg = opt.sridge_config();
  double gamma;
  if (opt.gamma.has_value()) {
    gamma = *opt.gamma;
  } else {
    gamma = cv_sridge(std_ds, cfg).selected;
  }
  return {fit_sridge(std_ds, gamma, cfg), gamma};
}

// MM-Lasso on standardized data: lambda by CV unless fixed. Returns the fit
// and the lambda used.
std::pair<FitResult, double> mmlasso_std(const Dataset& std_ds,
                                         const FitResult& init,
                                         const PipelineOptions& opt,
                                         std::optional<double> fixed) {
  MMLassoConfig cfg = opt.mmlasso_config();
  double lambda;
  if (fixed.has_value()) {
    lambda = *fixed;
  } else {
    const double lmax = estimate_lambda_max(std_ds, init, cfg);
    const PenaltyGrid grid = make_grid(lmax, std_ds.p(), std_ds.n());
    lambda = cv_mmlasso(std_ds, grid, init, cfg, opt.folds,
                        Rng::derive(opt.seed, 0x11).next_u64())
                 .selected;
  }
  return {fit_mmlasso(std_ds, lambda, init, cfg), lambda};
}

// Adaptive step on standardized data: reweight surviving carriers by
// |pilot|^varsigma and run the same penalty-selection scheme there.
std::pair<FitResult, double> adaptive_std(const Dataset& std_ds,
                                          const FitResult& pilot,
                                          const FitResult& init,
                                          const PipelineOptions& opt) {
  MMLassoConfig cfg = opt.mmlasso_config();
  if (opt.iota.has_value())
    return {fit_adaptive_mmlasso(std_ds, *opt.iota, pilot, init, cfg,
                                 opt.varsigma),
            *opt.iota};

  // penalty selection happens on the reweighted carriers
  const Eigen::Index p = std_ds.p();
  std::vector<Eigen::Index> survivors;
  for (Eigen::Index j = 0; j < p; ++j)
    if (pilot.coeffs[j] != 0.0) survivors.push_back(j);
  if (survivors.empty())
    return {fit_adaptive_mmlasso(std_ds, 0.0, pilot, init, cfg, opt.varsigma),
            0.0};

  Dataset reweighted;
  reweighted.has_intercept = std_ds.has_intercept;
  reweighted.y = std_ds.y;
  reweighted.X.resize(std_ds.n(), static_cast<Eigen::Index>(survivors.size()));
  FitResult rw_init;
  rw_init.intercept = init.intercept;
  rw_init.scale = init.scale;
  rw_init.coeffs.resize(static_cast<Eigen::Index>(survivors.size()));
  for (std::size_t k = 0; k < survivors.size(); ++k) {
    const Eigen::Index j = survivors[k];
    const double wj = std::pow(std::abs(pilot.coeffs[j]), opt.varsigma);
    reweighted.X.col(static_cast<Eigen::Index>(k)) = std_ds.X.col(j) * wj;
    rw_init.coeffs[static_cast<Eigen::Index>(k)] = init.coeffs[j] / wj;
  }
  const double imax = estimate_lambda_max(reweighted, rw_init, cfg);
  const PenaltyGrid grid = make_grid(imax, reweighted.p(), reweighted.n());
  const double iota = cv_mmlasso(reweighted, grid, rw_init, cfg, opt.folds,
                                 Rng::derive(opt.seed, 0x12).next_u64())
                          .selected;
  return {fit_adaptive_mmlasso(std_ds, iota, pilot, init, cfg, opt.varsigma),
          iota};
}

// LS-Lasso on standardized data. Returns the fit and lambda.
std::pair<FitResult, double> lslasso_std(const Dataset& std_ds,
                                         const PipelineOptions& opt,
                                         std::optional<double> fixed,
                                         std::uint64_t cv_tag) {
  double lambda;
  if (fixed.has_value()) {
    lambda = *fixed;
  } else {
    const double lmax = lslasso_lambda_max(std_ds);
    if (!(lmax > 0.0)) {
      lambda = 0.0;
    } else {
      const PenaltyGrid grid = make_grid(lmax, std_ds.p(), std_ds.n());
      lambda = cv_lslasso(std_ds, grid, opt.folds,
                          Rng::derive(opt.seed, cv_tag).next_u64())
                   .selected;
    }
  }
  return {fit_lslasso_fixed(std_ds, lambda), lambda};
}

}  // namespace

FitResult fit_oracle(const Dataset& ds, const std::vector<int>& support,
                     bool robust, const PipelineOptions& opt) {
  if (support.empty())
    throw std::invalid_argument("fit_oracle: empty support");
  Dataset restricted;
  restricted.has_intercept = ds.has_intercept;
  restricted.y = ds.y;
  restricted.X.resize(ds.n(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    const int j = support[k];
    if (j < 0 || j >= ds.p())
      throw std::invalid_argument("fit_oracle: support index out of range");
    restricted.X.col(static_cast<Eigen::Index>(k)) = ds.X.col(j);
  }

  FitResult inner;
  if (!robust) {
    auto [a, b] = ridge_wls(restricted.X, restricted.y,
                            Eigen::VectorXd::Ones(restricted.n()), 0.0,
                            restricted.has_intercept);
    inner.intercept = a;
    inner.coeffs = b;
    const Eigen::VectorXd r = fit_residuals(restricted, inner);
    inner.scale = std::sqrt(r.squaredNorm() / static_cast<double>(ds.n()));
    inner.converged = true;
  } else {
    // unpenalized MM at the efficiency tuning: S fit (gamma = 0) then the
    // MM step with lambda = 0
    auto [std_ds, st] = standardize(restricted);
    SRidgeConfig scfg = opt.sridge_config();
    FitResult init = fit_sridge(std_ds, 0.0, scfg);
    FitResult mm = fit_mmlasso(std_ds, 0.0, init, opt.mmlasso_config());
    inner = destandardize(mm, st);
    inner.scale = mm.scale;
    inner.converged = mm.converged;
  }

  FitResult out = inner;
  out.coeffs = Eigen::VectorXd::Zero(ds.p());
  for (std::size_t k = 0; k < support.size(); ++k)
    out.coeffs[support[k]] = inner.coeffs[static_cast<Eigen::Index>(k)];
  return out;
}

PipelineResult run_estimator(Estimator which, const Dataset& ds,
                             const PipelineOptions& opt) {
  PipelineResult result;

  if (which == Estimator::oracle_ls || which == Estimator::oracle_mm) {
    result.fit =
        fit_oracle(ds, opt.oracle_support, which == Estimator::oracle_mm, opt);
    return result;
  }

  auto [std_ds, st] = standardize(ds);

  switch (which) {
    case Estimator::sridge: {
      auto [init, gamma] = sridge_init(std_ds, opt);
      result.gamma = gamma;
      result.cv_used = !opt.gamma.has_value();
      result.fit = destandardize(init, st);
      result.fit.scale = init.scale;
      break;
    }
    case Estimator::mmlasso: {
      auto [init, gamma] = sridge_init(std_ds, opt);
      auto [fit, lambda] = mmlasso_std(std_ds, init, opt, opt.lambda);
      result.gamma = gamma;
      result.lambda = lambda;
      result.cv_used = !opt.lambda.has_value();
      result.fit = destandardize(fit, st);
      result.fit.scale = fit.scale;
      break;
    }
    case Estimator::adaptive_mmlasso: {
      auto [init, gamma] = sridge_init(std_ds, opt);
      auto [pilot, lambda] = mmlasso_std(std_ds, init, opt, opt.lambda);
      auto [fit, iota] = adaptive_std(std_ds, pilot, init, opt);
      result.gamma = gamma;
      result.lambda = iota;
      result.cv_used = !opt.iota.has_value();
      (void)lambda;
      result.fit = destandardize(fit, st);
      result.fit.scale = fit.scale;
      break;
    }
    case Estimator::lslasso: {
      auto [fit, lambda] = lslasso_std(std_ds, opt, opt.lambda, 0x21);
      result.lambda = lambda;
      result.cv_used = !opt.lambda.has_value();
      result.fit = destandardize(fit, st);
      result.fit.scale = fit.scale;
      break;
    }
    case Estimator::adaptive_lslasso: {
      auto [pilot, lambda0] = lslasso_std(std_ds, opt, opt.lambda, 0x21);
      (void)lambda0;
      // reciprocal-of-pilot weights via rescaled carriers
      std::vector<Eigen::Index> survivors;
      for (Eigen::Index j = 0; j < std_ds.p(); ++j)
        if (pilot.coeffs[j] != 0.0) survivors.push_back(j);
      FitResult fit;
      double iota = 0.0;
      if (survivors.empty()) {
        fit.coeffs = Eigen::VectorXd::Zero(std_ds.p());
        fit.intercept =
            std_ds.has_intercept ? std_ds.y.mean() : 0.0;
        fit.scale = std::sqrt((std_ds.y.array() - fit.intercept).square().sum() /
                              static_cast<double>(std_ds.n()));
      } else {
        Dataset reweighted;
        reweighted.has_intercept = std_ds.has_intercept;
        reweighted.y = std_ds.y;
        reweighted.X.resize(std_ds.n(),
                            static_cast<Eigen::Index>(survivors.size()));
        for (std::size_t k = 0; k < survivors.size(); ++k)
          reweighted.X.col(static_cast<Eigen::Index>(k)) =
              std_ds.X.col(survivors[k]) * std::abs(pilot.coeffs[survivors[k]]);
        auto [inner, sel] = lslasso_std(reweighted, opt, opt.iota, 0x22);
        iota = sel;
        fit = inner;
        Eigen::VectorXd full = Eigen::VectorXd::Zero(std_ds.p());
        for (std::size_t k = 0; k < survivors.size(); ++k)
          full[survivors[k]] = inner.coeffs[static_cast<Eigen::Index>(k)] *
                               std::abs(pilot.coeffs[survivors[k]]);
        fit.coeffs = std::move(full);
      }
      result.lambda = iota;
      result.cv_used = !opt.iota.has_value();
      result.fit = destandardize(fit, st);
      result.fit.scale = fit.scale;
      break;
    }
    default:
      throw std::logic_error("run_estimator: unhandled estimator");
  }
  return result;
}

}  // namespace mmlasso
