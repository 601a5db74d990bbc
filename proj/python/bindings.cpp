#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mmlasso/asymptotics.hpp"
#include "mmlasso/estimators.hpp"
#include "mmlasso/kernels.hpp"
#include "mmlasso/mmlasso.hpp"
#include "mmlasso/preprocess.hpp"
#include "mmlasso/scale.hpp"
#include "mmlasso/simbench.hpp"

namespace py = pybind11;
using namespace mmlasso;

namespace {

RhoSpec bisquare(double c) { return RhoSpec{RhoFamily::bisquare, c}; }

py::dict fit_to_dict(const FitResult& fit) {
  py::dict d;
  d["intercept"] = fit.intercept;
  d["coefficients"] = fit.coeffs;
  d["scale"] = fit.scale;
  d["lambda"] = fit.lambda;
  d["iterations"] = fit.iterations;
  d["converged"] = fit.converged;
  d["objective_trace"] = fit.objective_trace;
  return d;
}

py::dict fit_py(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                const std::string& estimator, py::object lambda_,
                py::object iota_, py::object gamma_, double efficiency,
                double b, std::uint64_t seed,
                const std::vector<int>& oracle_support) {
  auto which = parse_estimator(estimator);
  if (!which) throw py::value_error("unknown estimator: " + estimator);
  Dataset ds{X, y, true};
  PipelineOptions opt;
  opt.b = b;
  opt.efficiency = efficiency;
  opt.seed = seed;
  if (!lambda_.is_none()) opt.lambda = lambda_.cast<double>();
  if (!iota_.is_none()) opt.iota = iota_.cast<double>();
  if (!gamma_.is_none()) opt.gamma = gamma_.cast<double>();
  opt.oracle_support = oracle_support;
  PipelineResult res = run_estimator(*which, ds, opt);
  py::dict d = fit_to_dict(res.fit);
  d["lambda"] = res.lambda;
  d["gamma"] = res.gamma;
  d["cv_used"] = res.cv_used;
  return d;
}

py::dict constants_py(const std::string& errors, double sigma, double b,
                      double eff) {
  ErrorDist dist = ErrorDist::normal(sigma);
  if (errors == "t3") dist = ErrorDist::student_t(3);
  else if (errors == "t1") dist = ErrorDist::student_t(1);
  else if (errors != "normal")
    throw py::value_error("unknown error kind: " + errors);
  const double c0 = tune_for_scale_consistency(b);
  const double c1 = tune_for_efficiency(eff);
  AsymptoticConstants k =
      asymptotic_constants(bisquare(c0), bisquare(c1), b, dist);
  py::dict d;
  d["c0"] = c0;
  d["c1"] = c1;
  d["s0"] = k.s0;
  d["a"] = k.a;
  d["bconst"] = k.bconst;
  d["efficiency"] = k.efficiency;
  return d;
}

py::dict monte_carlo_py(int scenario, const std::string& errors,
                        const std::vector<std::string>& estimators, int M,
                        bool contaminate, std::uint64_t seed, int jobs) {
  auto kind = parse_error_kind(errors);
  if (!kind) throw py::value_error("unknown error kind: " + errors);
  std::vector<Estimator> which;
  for (const auto& name : estimators) {
    auto e = parse_estimator(name);
    if (!e) throw py::value_error("unknown estimator: " + name);
    which.push_back(*e);
  }
  MonteCarloOptions opt;
  opt.replications = M;
  opt.contaminated = contaminate;
  opt.seed = seed;
  opt.jobs = jobs;
  ScenarioReport report =
      run_monte_carlo(scenario_config(scenario, *kind, seed), which, opt);
  py::dict agg;
  for (const auto& [name, m] : report.aggregate) {
    py::dict row;
    row["accuracy"] = m.accuracy;
    row["fnr"] = m.fnr;
    row["fpr"] = m.fpr;
    row["failures"] = report.failure_count.at(name);
    row["curve"] = report.curve.at(name);
    agg[name.c_str()] = row;
  }
  py::dict out;
  out["aggregate"] = agg;
  out["y0_grid"] = report.y0_grid;
  out["csv"] = report_to_csv(report);
  return out;
}

}  // namespace

PYBIND11_MODULE(_mmlasso, m) {
  m.doc() = "Robust sparse regression: MM-Lasso and adaptive MM-Lasso";

  m.def("rho", [](double u, double c) { return rho(bisquare(c), u); },
        py::arg("u"), py::arg("c"), "Bisquare rho function, in [0, 1].");
  m.def("psi", [](double u, double c) { return psi(bisquare(c), u); },
        py::arg("u"), py::arg("c"));
  m.def("psi_prime",
        [](double u, double c) { return psi_prime(bisquare(c), u); },
        py::arg("u"), py::arg("c"));
  m.def("rho_weight",
        [](double u, double c) { return weight(bisquare(c), u); },
        py::arg("u"), py::arg("c"), "psi(u)/u with the limit filled at 0.");

  m.def("tune_for_scale_consistency", &tune_for_scale_consistency,
        py::arg("b"));
  m.def("tune_for_efficiency", &tune_for_efficiency, py::arg("eff"));

  m.def(
      "mscale",
      [](const Eigen::VectorXd& u, double b) {
        MScaleConfig cfg = default_mscale_config();
        cfg.b = b;
        cfg.rho0.c = tune_for_scale_consistency(b);
        return mscale(u, cfg);
      },
      py::arg("u"), py::arg("b") = 0.5,
      "M-estimate of scale with the bisquare kernel tuned for b.");
  m.def("median", [](const Eigen::VectorXd& v) { return median(v); },
        py::arg("v"));
  m.def("norm_mad", [](const Eigen::VectorXd& v) { return norm_mad(v); },
        py::arg("v"));
  m.def("tau_scale", [](const Eigen::VectorXd& r) { return tau_scale(r); },
        py::arg("residuals"));

  m.def("fit", &fit_py, py::arg("X"), py::arg("y"),
        py::arg("estimator") = "mmlasso", py::arg("lam") = py::none(),
        py::arg("iota") = py::none(), py::arg("gamma") = py::none(),
        py::arg("efficiency") = 0.85, py::arg("b") = 0.5, py::arg("seed") = 0,
        py::arg("oracle_support") = std::vector<int>{},
        "Fit an estimator on raw data; penalties left as None are chosen by "
        "cross-validation. Returns a dict with intercept, coefficients, "
        "scale, penalties and convergence info.");

  m.def("asymptotic_constants", &constants_py, py::arg("errors") = "normal",
        py::arg("sigma") = 1.0, py::arg("b") = 0.5, py::arg("eff") = 0.85);
  m.def(
      "oracle_covariance",
      [](const std::string& errors, double sigma, double b, double eff,
         const Eigen::MatrixXd& sigma_I) {
        ErrorDist dist = ErrorDist::normal(sigma);
        if (errors == "t3") dist = ErrorDist::student_t(3);
        else if (errors == "t1") dist = ErrorDist::student_t(1);
        AsymptoticConstants k = asymptotic_constants(
            bisquare(tune_for_scale_consistency(b)),
            bisquare(tune_for_efficiency(eff)), b, dist);
        return oracle_covariance(k, sigma_I);
      },
      py::arg("errors"), py::arg("sigma"), py::arg("b"), py::arg("eff"),
      py::arg("sigma_I"));

  m.def(
      "generate_scenario",
      [](int id, const std::string& errors, std::uint64_t seed,
         std::uint64_t replication) {
        auto kind = parse_error_kind(errors);
        if (!kind) throw py::value_error("unknown error kind: " + errors);
        auto [train, test] = generate_scenario(
            scenario_config(id, *kind, seed), replication);
        return py::make_tuple(train.X, train.y, test.X, test.y);
      },
      py::arg("scenario"), py::arg("errors") = "normal", py::arg("seed") = 0,
      py::arg("replication") = 0);

  m.def("monte_carlo", &monte_carlo_py, py::arg("scenario"),
        py::arg("errors") = "normal",
        py::arg("estimators") =
            std::vector<std::string>{"mmlasso", "adaptive-mmlasso"},
        py::arg("M") = 10, py::arg("contaminate") = false, py::arg("seed") = 0,
        py::arg("jobs") = 0);
}
