#include "mmlasso/pwls.hpp"

#include <cmath>
#include <stdexcept>

namespace mmlasso {

namespace {

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

}  // namespace

InterceptOrthogonalization orthogonalize_intercept(
    const Eigen::MatrixXd& Xw, const Eigen::VectorXd& kstar) {
  const double k2 = kstar.squaredNorm();
  if (!(k2 > 0.0))
    throw std::invalid_argument(
        "orthogonalize_intercept: all weights are zero");
  InterceptOrthogonalization out;
  out.kstar_sqnorm = k2;
  out.eta = (Xw.transpose() * kstar) / k2;
  out.Xperp = Xw - kstar * out.eta.transpose();
  return out;
}

double recover_intercept(const Eigen::VectorXd& kstar,
                         const Eigen::VectorXd& eta, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& slopes) {
  const double k2 = kstar.squaredNorm();
  if (!(k2 > 0.0))
    throw std::invalid_argument("recover_intercept: degenerate k*");
  return kstar.dot(y) / k2 - eta.dot(slopes);
}

double lasso_kkt_gap(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     double penalty, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd r = y - X * beta;
  const Eigen::VectorXd g = X.transpose() * r;
  double gap = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0) {
      double sgn = beta[j] > 0.0 ? 1.0 : -1.0;
      gap = std::max(gap, std::abs(g[j] - penalty * sgn) / (1.0 + penalty));
    } else {
      gap = std::max(gap, std::abs(g[j]) - penalty);
    }
  }
  return gap;
}

Eigen::VectorXd solve_weighted_lasso(const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& y, double penalty,
                                     const Eigen::VectorXd* warm_start,
                                     const LassoOptions& opt) {
  if (penalty < 0.0)
    throw std::invalid_argument("solve_weighted_lasso: negative penalty");
  const Eigen::Index p = X.cols();
  Eigen::VectorXd beta =
      warm_start != nullptr ? *warm_start : Eigen::VectorXd::Zero(p);
  if (beta.size() != p)
    throw std::invalid_argument("solve_weighted_lasso: warm start size");

  const Eigen::VectorXd colsq = X.colwise().squaredNorm();
  Eigen::VectorXd r = y - X * beta;

  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!(colsq[j] > 0.0)) {
        // null column: coefficient pinned at zero
        if (beta[j] != 0.0) {
          r += X.col(j) * beta[j];
          beta[j] = 0.0;
        }
        continue;
      }
      const double z = X.col(j).dot(r) + colsq[j] * beta[j];
      const double bj = soft_threshold(z, penalty) / colsq[j];
      const double d = bj - beta[j];
      if (d != 0.0) {
        r -= X.col(j) * d;
        beta[j] = bj;
        max_change = std::max(max_change, std::abs(d));
      }
    }
    if (max_change < opt.sweep_tol) {
      // refresh the residual before certifying, to clear accumulated drift
      r = y - X * beta;
      if (lasso_kkt_gap(X, y, penalty, beta) <= opt.kkt_tol) return beta;
    }
  }
  throw std::runtime_error(
      "solve_weighted_lasso: no KKT-certified solution within max_sweeps");
}

}  // namespace mmlasso
