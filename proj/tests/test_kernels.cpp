#include <doctest.h>

#include <cmath>

#include "mmlasso/kernels.hpp"
#include "mmlasso/quadrature.hpp"

using namespace mmlasso;

namespace {

RhoSpec bisq(double c) { return RhoSpec{RhoFamily::bisquare, c}; }

// independent oracle: Simpson-rule expectation of rho_c under the standard
// normal, nothing shared with the production Gauss-Legendre path
double simpson_normal_rho(double c) {
  const int n = 20000;
  const double lim = 12.0;
  const double h = 2.0 * lim / n;
  auto f = [&](double u) {
    return rho(bisq(c), u) * std::exp(-0.5 * u * u) /
           std::sqrt(2.0 * 3.14159265358979323846);
  };
  double s = f(-lim) + f(lim);
  for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(-lim + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("rho point values") {
  CHECK(rho(bisq(1.0), 0.0) == 0.0);
  CHECK(rho(bisq(1.0), 1.0) == 1.0);
  CHECK(rho(bisq(2.0), 1.0) == doctest::Approx(0.578125).epsilon(1e-12));
  CHECK(rho(bisq(2.0), 5.0) == 1.0);
  CHECK(rho(bisq(2.0), -5.0) == 1.0);
}

TEST_CASE("psi point values") {
  CHECK(psi(bisq(1.0), 0.0) == 0.0);
  CHECK(psi(bisq(1.0), 1.0) == 0.0);
  CHECK(psi(bisq(2.0), 1.0) == doctest::Approx(0.84375).epsilon(1e-12));
}

TEST_CASE("psi_prime point values") {
  CHECK(psi_prime(bisq(1.0), 0.0) == doctest::Approx(6.0));
  CHECK(psi_prime(bisq(1.0), 2.0) == 0.0);
}

TEST_CASE("weight point values") {
  CHECK(weight(bisq(1.0), 0.0) == doctest::Approx(6.0));
  CHECK(weight(bisq(1.0), 1.0) == 0.0);
  CHECK(weight(bisq(2.0), 1.0) == doctest::Approx(0.84375).epsilon(1e-12));
}

TEST_CASE("symmetry and range on a grid") {
  const double c = 1.7;
  for (int i = 0; i <= 200; ++i) {
    const double u = -2.0 * c + 4.0 * c * i / 200.0;
    CHECK(rho(bisq(c), u) >= 0.0);
    CHECK(rho(bisq(c), u) <= 1.0);
    CHECK(rho(bisq(c), -u) == doctest::Approx(rho(bisq(c), u)).epsilon(1e-15));
    CHECK(psi(bisq(c), -u) == doctest::Approx(-psi(bisq(c), u)).epsilon(1e-15));
    CHECK(weight(bisq(c), u) >= 0.0);
  }
}

TEST_CASE("psi matches finite differences of rho") {
  const double c = 1.3;
  const double h = 1e-6;
  for (int i = 0; i <= 100; ++i) {
    const double u = -2.0 * c + 4.0 * c * i / 100.0;
    const double fd = (rho(bisq(c), u + h) - rho(bisq(c), u - h)) / (2.0 * h);
    CHECK(psi(bisq(c), u) == doctest::Approx(fd).epsilon(0).scale(1).margin(1e-6));
  }
}

TEST_CASE("psi_prime matches finite differences of psi") {
  const double c = 2.2;
  const double h = 1e-6;
  for (int i = 0; i <= 100; ++i) {
    const double u = -2.0 * c + 4.0 * c * i / 100.0;
    const double fd = (psi(bisq(c), u + h) - psi(bisq(c), u - h)) / (2.0 * h);
    CHECK(psi_prime(bisq(c), u) ==
          doctest::Approx(fd).epsilon(0).scale(1).margin(1e-6));
  }
}

TEST_CASE("weight non-increasing in |u|") {
  const double c = 3.0;
  double prev = weight(bisq(c), 0.0);
  for (int i = 1; i <= 300; ++i) {
    const double u = 1.2 * c * i / 300.0;
    const double w = weight(bisq(c), u);
    CHECK(w <= prev + 1e-15);
    prev = w;
  }
}

TEST_CASE("scale-consistency tuning") {
  const double c0 = tune_for_scale_consistency(0.5);
  CHECK(c0 == doctest::Approx(1.5476).epsilon(0).margin(1e-3));
  CHECK(tune_for_scale_consistency(0.25) ==
        doctest::Approx(2.937).epsilon(0).margin(5e-3));

  // round trip against the independent Simpson oracle
  CHECK(simpson_normal_rho(c0) == doctest::Approx(0.5).epsilon(0).margin(1e-8));
  CHECK(normal_rho_expectation(c0) ==
        doctest::Approx(0.5).epsilon(0).margin(1e-8));

  // monotone decreasing in b
  CHECK(tune_for_scale_consistency(0.6) < c0);
  CHECK(c0 < tune_for_scale_consistency(0.25));
  CHECK(tune_for_scale_consistency(0.9) < tune_for_scale_consistency(0.6));
}

TEST_CASE("efficiency tuning") {
  const double c1 = tune_for_efficiency(0.85);
  CHECK(c1 == doctest::Approx(3.4437).epsilon(0).margin(1e-3));
  CHECK(tune_for_efficiency(0.95) ==
        doctest::Approx(4.685).epsilon(0).margin(5e-3));
  // efficiency is monotone increasing in c
  CHECK(c1 < tune_for_efficiency(0.95));
  CHECK(normal_efficiency(c1) == doctest::Approx(0.85).epsilon(0).margin(1e-9));
}

TEST_CASE("tuning rejects bad targets") {
  CHECK_THROWS(tune_for_scale_consistency(0.0));
  CHECK_THROWS(tune_for_scale_consistency(1.0));
  CHECK_THROWS(tune_for_efficiency(1.0));
}
