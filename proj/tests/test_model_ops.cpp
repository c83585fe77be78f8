#include "conetorsion/errors.hpp"
#include "conetorsion/torsion.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <cmath>

using namespace conetorsion;
using F50 = boost::multiprecision::cpp_bin_float_50;

namespace {

ModelOperatorSpec spec(ModelKind kind, double nu, double alpha, double eps = 0.25) {
  ModelOperatorSpec s;
  s.kind = kind;
  s.nu = nu;
  s.alpha = alpha;
  s.eps = eps;
  return s;
}

// 2^nu Gamma(nu) / (w^nu (1 + a/nu)) (w I'_nu(w) + a I_nu(w)) at 50 digits.
double full_ratio_50(double nu, double a, double w) {
  const F50 n(nu), x(w), al(a);
  const F50 ip = boost::math::cyl_bessel_i_prime(n, x);
  const F50 i = boost::math::cyl_bessel_i(n, x);
  const F50 r = pow(F50(2), n) * boost::math::tgamma(n) / (pow(x, n) * (1 + al / n)) * (x * ip + al * i);
  return r.convert_to<double>();
}

}  // namespace

TEST_CASE("full psi example at nu = 1, alpha = 1/2, z = 1") {
  const double expect = full_ratio_50(1.0, 0.5, 1.0);
  CHECK(model_det_ratio(spec(ModelKind::psi_full, 1.0, 0.5), 1.0) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(model_det_ratio(spec(ModelKind::phi_full, 1.0, 0.5), 1.0) ==
        doctest::Approx(full_ratio_50(1.0, -0.5, 1.0)).epsilon(1e-13));
}

TEST_CASE("full ratios match the 50-digit closed form over a grid") {
  for (double nu : {0.75, 1.5, 4.0, 12.5}) {
    for (double z : {0.05, 0.8, 3.0, 10.0}) {
      for (double a : {0.5, -0.5, 0.25}) {
        CAPTURE(nu);
        CAPTURE(z);
        const double r = model_det_ratio(spec(ModelKind::psi_full, nu, a), z);
        CHECK(r == doctest::Approx(full_ratio_50(nu, a, nu * z)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("closed forms agree with the ODE oracle") {
  double worst = 0.0;
  for (ModelKind kind : {ModelKind::psi_truncated, ModelKind::phi_truncated, ModelKind::psi_full,
                         ModelKind::phi_full}) {
    for (double nu : {0.8, 1.5, 3.0, 7.5}) {
      for (double z : {0.1, 0.7, 2.0, 6.0}) {
        for (double eps : {0.1, 0.25, 0.6}) {
          const ModelOperatorSpec s = spec(kind, nu, 0.5, eps);
          const double a = model_det_ratio(s, z);
          const double b = gy_det_ratio_oracle(s, z);
          worst = std::max(worst, std::abs(a / b - 1.0));
        }
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("harmonic determinant") {
  CHECK(harmonic_det(0.5, 0.25) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(harmonic_det(-0.5, 0.25) == harmonic_det(0.5, 0.25));
  for (double a : {0.5, 1.0, 1.5}) {
    for (double eps : {0.1, 0.5}) {
      CHECK(harmonic_det_oracle(a, eps) == doctest::Approx(harmonic_det(a, eps)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(harmonic_det(0.0, 0.25), DomainError);
  CHECK_THROWS_AS(harmonic_det(0.5, 1.0), InvalidArgument);
  for (double z : {0.3, 2.0}) {
    const ModelOperatorSpec s = spec(ModelKind::harmonic_H0, 0.0, 1.5, 0.3);
    CHECK(model_det_ratio(s, z) == doctest::Approx(gy_det_ratio_oracle(s, z)).epsilon(1e-10));
  }
}

TEST_CASE("ratios tend to one as z -> 0") {
  for (ModelKind kind : {ModelKind::psi_truncated, ModelKind::phi_truncated, ModelKind::psi_full,
                         ModelKind::phi_full}) {
    CHECK(model_det_ratio(spec(kind, 2.0, 0.5), 1e-6) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(model_det_ratio(spec(kind, 2.0, 0.5), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("invalid model parameters") {
  CHECK_THROWS_AS(model_det_ratio(spec(ModelKind::psi_truncated, 0.5, 0.5), 1.0), PoleError);
  CHECK_THROWS_AS(model_det_ratio(spec(ModelKind::harmonic_H0, 1.0, 0.0), 1.0), DomainError);
  CHECK_THROWS_AS(model_det_ratio(spec(ModelKind::psi_truncated, 2.0, 0.5, 1.2), 1.0), InvalidArgument);
  CHECK_THROWS_AS(model_det_ratio(spec(ModelKind::psi_full, 2.0, 0.5), -1.0), InvalidArgument);
  CHECK_THROWS_AS(gy_det_ratio_oracle(spec(ModelKind::psi_truncated, 50.0, 0.5, 0.1), 20.0), StiffnessError);
}

TEST_CASE("large ratios are computed in log space") {
  const double r = model_det_ratio(spec(ModelKind::psi_truncated, 30.0, 0.5, 0.25), 10.0);
  CHECK(std::isfinite(r));
  CHECK(r > 1e50);
  CHECK_THROWS_AS(model_det_ratio(spec(ModelKind::psi_full, 400.0, 0.5), 10.0), OverflowError);
}

TEST_CASE("p(lambda) vanishes as lambda -> 0 and tends to the AB constant at -infinity") {
  struct Case {
    double nu, alpha, eps;
    int n;
    double ab;
  };
  const Case cases[] = {{2.5, 0.5, 0.25, 2, -0.00546510810816436},
                        {3.0, 1.5, 0.25, 4, -0.0152789553347762},
                        {3.5, -0.5, 0.1, 2, 0.0019677867374952}};
  for (const Case& c : cases) {
    CAPTURE(c.nu);
    CHECK(ab_constant(c.nu, c.alpha, c.n) == doctest::Approx(c.ab).epsilon(1e-13));
    CHECK(std::abs(t_eta_lambda(c.nu, c.alpha, c.eps, -1e-8, c.n).p) < 1e-9);
    CHECK(t_eta_lambda(c.nu, c.alpha, c.eps, -1e6, c.n).p == doctest::Approx(c.ab).epsilon(1e-6));
  }
}

TEST_CASE("AB constant equals its closed form") {
  // log((nu - a)/(nu + a)) minus the first n terms of its expansion in a/nu.
  const double nu = 4.0, a = 0.5;
  const double full = std::log((nu - a) / (nu + a));
  const double head = -2 * (a / nu) - 2 * std::pow(a / nu, 3) / 3;
  CHECK(ab_constant(nu, a, 3) == doctest::Approx(full - head).epsilon(1e-12));
  CHECK(ab_constant(nu, a, 4) == ab_constant(nu, a, 3));
}

TEST_CASE("t(lambda) approaches its large-nu expansion at the expected rate") {
  double prev = 0.0;
  for (double nu : {20.0, 40.0, 80.0}) {
    const double d = std::abs(t_eta_lambda(nu, 0.5, 0.25, -2.0, 4).t - t_large_nu_series(nu, 0.5, 0.25, -2.0, 4));
    if (prev > 0.0) {
      const double slope = std::log2(prev / d);
      CHECK(slope > 4.5);
    }
    prev = d;
  }
  CHECK(prev < 1e-10);
}

TEST_CASE("t(lambda) argument validation") {
  CHECK_THROWS_AS(t_eta_lambda(2.0, 0.5, 0.25, 0.0, 2), InvalidArgument);
  CHECK_THROWS_AS(t_eta_lambda(2.0, 0.5, 0.25, 1.0, 2), InvalidArgument);
  CHECK_THROWS_AS(t_eta_lambda(0.4, 0.5, 0.25, -1.0, 2), PoleError);
  CHECK_THROWS_AS(t_eta_lambda(2.0, 0.5, 1.5, -1.0, 2), InvalidArgument);
}
