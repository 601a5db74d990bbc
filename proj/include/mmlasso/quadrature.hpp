#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace mmlasso {

//! Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
//! on the Legendre recurrence. Results are cached per n.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(
    int n);

//! Integrate f over [a, b] with an n-point Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int n = 64);

//! Adaptive Simpson integration to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-10);

//! Safeguarded bracketed root finder (bisection with secant acceleration).
//! Requires f(lo) and f(hi) of opposite sign. Stops when |f| <= ftol and the
//! bracket has relative width <= xtol_rel; throws on non-convergence.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double ftol, double xtol_rel = 1e-13, int max_iter = 200);

}  // namespace mmlasso
