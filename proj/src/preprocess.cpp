#include "mmlasso/preprocess.hpp"

#include <stdexcept>

#include "mmlasso/scale.hpp"

namespace mmlasso {

std::pair<Dataset, Standardization> standardize(const Dataset& ds) {
  const Eigen::Index n = ds.n();
  const Eigen::Index p = ds.p();
  if (n < 2) throw std::invalid_argument("standardize: need at least 2 rows");

  Standardization st;
  st.col_center = Eigen::VectorXd::Zero(p);
  st.col_scale = Eigen::VectorXd::Ones(p);
  st.has_intercept = ds.has_intercept;
  st.p_original = p;

  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::VectorXd col = ds.X.col(j);
    const double scale = norm_mad(col);
    if (scale > 0.0) {
      st.kept.push_back(static_cast<int>(j));
      st.col_center[j] = ds.has_intercept ? median(col) : 0.0;
      st.col_scale[j] = scale;
    } else {
      st.dropped.push_back(static_cast<int>(j));
    }
  }
  if (st.kept.empty() && p > 0)
    throw std::invalid_argument("standardize: all columns are degenerate");

  Dataset out;
  out.has_intercept = ds.has_intercept;
  out.X.resize(n, static_cast<Eigen::Index>(st.kept.size()));
  for (std::size_t k = 0; k < st.kept.size(); ++k) {
    const int j = st.kept[k];
    out.X.col(static_cast<Eigen::Index>(k)) =
        (ds.X.col(j).array() - st.col_center[j]) / st.col_scale[j];
  }
  st.y_center = ds.has_intercept ? median(ds.y) : 0.0;
  out.y = ds.y.array() - st.y_center;
  return {std::move(out), std::move(st)};
}

std::pair<double, Eigen::VectorXd> destandardize(
    double intercept_std, const Eigen::VectorXd& coeffs_std,
    const Standardization& st) {
  if (coeffs_std.size() != static_cast<Eigen::Index>(st.kept.size()))
    throw std::invalid_argument("destandardize: coefficient length mismatch");
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(st.p_original);
  double shift = 0.0;
  for (std::size_t k = 0; k < st.kept.size(); ++k) {
    const int j = st.kept[k];
    const double bj = coeffs_std[static_cast<Eigen::Index>(k)] / st.col_scale[j];
    coeffs[j] = bj;
    shift += bj * st.col_center[j];
  }
  const double intercept = intercept_std + st.y_center - shift;
  return {intercept, std::move(coeffs)};
}

FitResult destandardize(const FitResult& fit_std, const Standardization& st) {
  FitResult out = fit_std;
  auto [icpt, coeffs] = destandardize(fit_std.intercept, fit_std.coeffs, st);
  out.intercept = icpt;
  out.coeffs = std::move(coeffs);
  return out;
}

}  // namespace mmlasso
