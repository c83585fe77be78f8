#include "conetorsion/olverpoly.hpp"

#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include <cmath>
#include <future>
#include <vector>

using namespace conetorsion;

namespace {

CoeffPolynomial t_mono(int p, Rational c) { return CoeffPolynomial::monomial(p, 0, c); }
CoeffPolynomial ta_mono(int p, int q, Rational c) { return CoeffPolynomial::monomial(p, q, c); }

Rational rpow(const Rational& x, int r) {
  Rational p = 1;
  for (int i = 0; i < r; ++i) p *= x;
  return p;
}

}  // namespace

TEST_CASE("u_0 = v_0 = 1") {
  CHECK(olver_u(0) == CoeffPolynomial(Rational(1)));
  CHECK(olver_v(0) == CoeffPolynomial(Rational(1)));
}

TEST_CASE("first Olver pair") {
  const OlverPair p = olver_pair(1);
  CHECK(p.u == t_mono(1, Rational(3, 24)) + t_mono(3, Rational(-5, 24)));
  CHECK(p.v == t_mono(1, Rational(-9, 24)) + t_mono(3, Rational(7, 24)));
}

TEST_CASE("second Olver pair against the classical table") {
  CHECK(olver_u(2) == t_mono(2, Rational(81, 1152)) + t_mono(4, Rational(-462, 1152)) + t_mono(6, Rational(385, 1152)));
  CHECK(olver_v(2) == t_mono(2, Rational(-135, 1152)) + t_mono(4, Rational(594, 1152)) + t_mono(6, Rational(-455, 1152)));
}

TEST_CASE("u_1 and v_1 match I_nu(nu z) and I'_nu(nu z) at nu = 50") {
  const double nu = 50.0;
  for (double z : {0.3, 0.8, 2.0}) {
    const double t = 1.0 / std::sqrt(1.0 + z * z);
    const double xi = 1.0 / t + std::log(z / (1.0 + 1.0 / t));
    const double lead_i = std::exp(nu * xi) / std::sqrt(2.0 * M_PI * nu) / std::pow(1.0 + z * z, 0.25);
    const double lead_ip = std::exp(nu * xi) / std::sqrt(2.0 * M_PI * nu) * std::pow(1.0 + z * z, 0.25) / z;
    const double i_ratio = boost::math::cyl_bessel_i(nu, nu * z) / lead_i;
    const double ip_ratio = boost::math::cyl_bessel_i_prime(nu, nu * z) / lead_ip;
    // Remainder after the first correction is about u_2 / nu^2.
    CHECK(std::abs(i_ratio - 1.0 - olver_u(1).eval(t) / nu) < 2.0 * std::abs(olver_u(2).eval(t)) / (nu * nu) + 1e-12);
    CHECK(std::abs(ip_ratio - 1.0 - olver_v(1).eval(t) / nu) < 2.0 * std::abs(olver_v(2).eval(t)) / (nu * nu) + 1e-12);
  }
}

TEST_CASE("D_1 = u_1 and D_2 = u_2 - u_1^2/2") {
  CHECK(d_poly(1) == olver_u(1));
  CHECK(d_poly(2) == olver_u(2) - olver_u(1) * olver_u(1) * Rational(1, 2));
}

TEST_CASE("D_r and M_r have only t^{r+2b} exponents, alpha degree <= r") {
  for (int r = 1; r <= 8; ++r) {
    for (int p : d_poly(r).t_powers()) {
      CHECK(p >= r);
      CHECK(p <= 3 * r);
      CHECK((p - r) % 2 == 0);
    }
    for (int p : m_poly(r).t_powers()) {
      CHECK(p >= r);
      CHECK(p <= 3 * r);
      CHECK((p - r) % 2 == 0);
    }
    CHECK(m_poly(r).degree_alpha() <= r);
  }
}

TEST_CASE("M_2 coefficients as printed") {
  const CoeffPolynomial expected = t_mono(2, Rational(-3, 16)) + ta_mono(2, 1, Rational(1, 2)) +
                                   ta_mono(2, 2, Rational(-1, 2)) + t_mono(4, Rational(5, 8)) +
                                   ta_mono(4, 1, Rational(-1, 2)) + t_mono(6, Rational(-7, 16));
  CHECK(m_poly(2) == expected);
  CHECK(z_coeff(2, 0).eval_exact(0, Rational(1, 2)) == Rational(-1, 16));
  CHECK(z_coeff(2, 1).eval_exact(0, Rational(1, 2)) == Rational(3, 8));
  CHECK(z_coeff(2, 2).eval_exact(0, Rational(1, 2)) == Rational(-7, 16));
}

TEST_CASE("M_r(1, a) = D_r(1) - (-a)^r / r exactly for r = 1..6") {
  for (int r = 1; r <= 6; ++r) {
    // Degree <= r in alpha, so r+1 distinct points decide the identity.
    for (int i = -3; i <= r; ++i) {
      const Rational a(i, 3);
      CHECK(m_poly(r).eval_exact(1, a) == d_poly(r).eval_exact(1) - rpow(-a, r) / r);
    }
  }
}

TEST_CASE("z-difference sums") {
  for (int r = 1; r <= 6; ++r) {
    const CoeffPolynomial expected = CoeffPolynomial::monomial(0, r, (rpow(-1, r) - 1) / Rational(r));
    CHECK(z_diff_sum_poly(r) == expected);
    if (r % 2 == 0) CHECK(z_diff_sum_poly(r).is_zero());
  }
  CHECK(z_diff_sum(1, 0.5) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(z_diff_sum(3, 0.5) == doctest::Approx(-1.0 / 12.0).epsilon(1e-15));
  CHECK(z_diff_sum(2, 0.5) == 0.0);
}

TEST_CASE("sum of D_r / nu^r reproduces the log of the u-series at (t, nu) = (0.7, 40)") {
  const double t = 0.7, nu = 40.0;
  double series = 1.0, logsum = 0.0;
  for (int r = 1; r <= 6; ++r) {
    series += olver_u(r).eval(t) / std::pow(nu, r);
    logsum += d_poly(r).eval(t) / std::pow(nu, r);
  }
  CHECK(std::abs(logsum - std::log(series)) < 1e-10);
}

TEST_CASE("M_r(t, 0) equals the log of the v-series") {
  std::vector<CoeffPolynomial> g;
  for (int j = 1; j <= 6; ++j) g.push_back(olver_v(j));
  const auto f = formal_log(g);
  for (int r = 1; r <= 6; ++r) {
    for (int p : m_poly(r).t_powers()) CHECK(m_poly(r).coeff(p, 0) == f[r - 1].coeff(p, 0));
  }
}

TEST_CASE("formal_log of (1 + x) gives the alternating harmonic coefficients") {
  std::vector<CoeffPolynomial> g{CoeffPolynomial(Rational(1)), CoeffPolynomial(), CoeffPolynomial(), CoeffPolynomial()};
  const auto f = formal_log(g);
  REQUIRE(f.size() == 4);
  CHECK(f[0] == CoeffPolynomial(Rational(1)));
  CHECK(f[1] == CoeffPolynomial(Rational(-1, 2)));
  CHECK(f[2] == CoeffPolynomial(Rational(1, 3)));
  CHECK(f[3] == CoeffPolynomial(Rational(-1, 4)));
}

TEST_CASE("polynomial algebra") {
  const CoeffPolynomial p = t_mono(1, 2) + t_mono(3, Rational(1, 3));
  CHECK(p.derivative_t() == CoeffPolynomial(Rational(2)) + t_mono(2, 1));
  CHECK(p.derivative_t().integral_t() == p);
  CHECK((p - p).is_zero());
  CHECK(p.eval_exact(Rational(3)) == Rational(15));
  const CoeffPolynomial q = ta_mono(1, 1, 1);
  CHECK(q.scale_alpha(-1) == ta_mono(1, 1, -1));
  CHECK(rational_string(Rational(-3, 16)) == "-3/16");
  CHECK(p.to_string() == "1/3*t^3 + 2*t");
}

TEST_CASE("memo is safe under concurrent first use") {
  std::vector<std::future<std::string>> fut;
  for (int i = 0; i < 8; ++i) {
    fut.push_back(std::async(std::launch::async, [] { return m_poly(10).to_string(); }));
  }
  const std::string first = fut[0].get();
  for (int i = 1; i < 8; ++i) CHECK(fut[i].get() == first);
}

TEST_CASE("maximum order is enforced") {
  CHECK(olver_max_order() >= 12);
  CHECK_THROWS(olver_u(olver_max_order() + 1));
}
