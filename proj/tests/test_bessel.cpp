#include "conetorsion/bessel.hpp"
#include "conetorsion/errors.hpp"

#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <random>

using namespace conetorsion;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// I_nu(x) = sum_k (x/2)^{2k+nu} / (k! Gamma(k+nu+1)) in 50 digits.
Big series_i(const Big& nu, const Big& x) {
  const Big h = x / 2;
  Big term = pow(h, nu) / boost::multiprecision::tgamma(nu + 1);
  Big sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= h * h / (k * (k + nu));
    sum += term;
    if (abs(term) < abs(sum) * Big("1e-55")) break;
  }
  return sum;
}

Big series_k(const Big& nu, const Big& x) {
  const Big pi = boost::math::constants::pi<Big>();
  return pi / 2 * (series_i(-nu, x) - series_i(nu, x)) / sin(nu * pi);
}

Big series_i_prime(const Big& nu, const Big& x) { return (series_i(nu - 1, x) + series_i(nu + 1, x)) / 2; }
Big series_k_prime(const Big& nu, const Big& x) { return -(series_k(nu - 1, x) + series_k(nu + 1, x)) / 2; }

double relerr(double a, const Big& b) { return std::abs(a / b.convert_to<double>() - 1.0); }

}  // namespace

TEST_CASE("half-integer closed forms") {
  for (double x : {0.01, 0.5, 1.0, 3.0, 20.0, 80.0}) {
    const BesselQuad q = modified_bessel(0.5, x);
    CHECK(q.i_val == doctest::Approx(std::sqrt(2.0 / (M_PI * x)) * std::sinh(x)).epsilon(1e-13));
    CHECK(q.k_val == doctest::Approx(std::sqrt(M_PI / (2.0 * x)) * std::exp(-x)).epsilon(1e-13));
  }
}

TEST_CASE("K_0 small-argument limit") {
  const double x = 1e-6;
  CHECK(modified_bessel(0.0, x).k_val == doctest::Approx(-std::log(x / 2.0) - 0.5772156649015329).epsilon(1e-10));
}

TEST_CASE("nu = 3.7, x = 2.1 against a 50-digit series") {
  const Big nu("3.7"), x("2.1");
  const BesselQuad q = modified_bessel(3.7, 2.1);
  CHECK(relerr(q.i_val, series_i(nu, x)) < 1e-13);
  CHECK(relerr(q.k_val, series_k(nu, x)) < 1e-13);
  CHECK(relerr(q.i_prime, series_i_prime(nu, x)) < 1e-13);
  CHECK(relerr(q.k_prime, series_k_prime(nu, x)) < 1e-13);
}

TEST_CASE("grid against 50-digit series, both evaluation regimes") {
  for (const char* nu_s : {"0.3", "1.25", "2.5", "4.6", "9.9"}) {
    for (const char* x_s : {"0.05", "0.7", "1.9", "2.3", "6.5", "15.0"}) {
      const Big nu(nu_s), x(x_s);
      const BesselQuad q = modified_bessel(nu.convert_to<double>(), x.convert_to<double>());
      CHECK(relerr(q.i_val, series_i(nu, x)) < 1e-11);
      CHECK(relerr(q.k_val, series_k(nu, x)) < 1e-11);
      CHECK(relerr(q.i_prime, series_i_prime(nu, x)) < 1e-11);
      CHECK(relerr(q.k_prime, series_k_prime(nu, x)) < 1e-11);
    }
  }
}

TEST_CASE("scaled and unscaled values agree") {
  const BesselQuad u = modified_bessel(2.2, 5.0, false);
  const BesselQuad s = modified_bessel(2.2, 5.0, true);
  CHECK(s.scaled);
  CHECK(s.i_val * std::exp(5.0) == doctest::Approx(u.i_val).epsilon(1e-14));
  CHECK(s.k_val * std::exp(-5.0) == doctest::Approx(u.k_val).epsilon(1e-14));
  CHECK(s.k_prime * std::exp(-5.0) == doctest::Approx(u.k_prime).epsilon(1e-14));
}

TEST_CASE("Wronskian at 100 random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> nu_d(0.0, 50.0), x_d(0.1, 50.0);
  for (int i = 0; i < 100; ++i) {
    const double nu = nu_d(rng), x = x_d(rng);
    const BesselQuad q = modified_bessel(nu, x, true);
    CHECK(std::abs(x * (q.k_val * q.i_prime - q.k_prime * q.i_val) - 1.0) < 1e-12);
  }
}

TEST_CASE("derivative recurrence I' = (I_{nu-1} + I_{nu+1}) / 2") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> nu_d(1.0, 40.0), x_d(0.1, 40.0);
  for (int i = 0; i < 50; ++i) {
    const double nu = nu_d(rng), x = x_d(rng);
    const double ip = modified_bessel(nu, x, true).i_prime;
    const double avg = 0.5 * (modified_bessel(nu - 1.0, x, true).i_val + modified_bessel(nu + 1.0, x, true).i_val);
    CHECK(std::abs(ip / avg - 1.0) < 1e-11);
  }
}

TEST_CASE("small-argument leading forms") {
  const double nu = 2.5, z = 1e-4;
  const BesselQuad lead = small_argument_leading(nu, z);
  CHECK(lead.i_val == doctest::Approx(std::pow(z, nu) / (std::pow(2.0, nu) * std::tgamma(nu + 1))).epsilon(1e-14));
  CHECK(lead.k_val == doctest::Approx(std::pow(2.0, nu - 1) * std::tgamma(nu) / std::pow(z, nu)).epsilon(1e-14));
  const BesselQuad q = modified_bessel(nu, z);
  CHECK(q.i_val / lead.i_val == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(q.k_val / lead.k_val == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(q.i_prime / q.i_val * z == doctest::Approx(nu).epsilon(1e-7));
  CHECK_THROWS_AS(small_argument_leading(0.0, 0.1), InvalidArgument);
}

TEST_CASE("uniform expansion at nu = 100, z = 1, four terms") {
  const BesselQuad q = modified_bessel(100.0, 100.0, true);
  const double si = std::exp(100.0), sk = std::exp(-100.0);
  CHECK(uniform_expansion(BesselKind::I, 100.0, 1.0, 4).value / (q.i_val * si) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(uniform_expansion(BesselKind::IPrime, 100.0, 1.0, 4).value / (q.i_prime * si) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(uniform_expansion(BesselKind::K, 100.0, 1.0, 4).value / (q.k_val * sk) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(uniform_expansion(BesselKind::KPrime, 100.0, 1.0, 4).value / (q.k_prime * sk) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("uniform expansion error is within its truncation estimate for nu >= 30") {
  for (double nu : {30.0, 60.0}) {
    for (double z : {0.5, 1.5}) {
      const Big bnu(nu), bx(nu * z);
      const double exact_i = series_i(bnu, bx).convert_to<double>();
      for (int terms : {1, 2, 3}) {
        const UniformValue v = uniform_expansion(BesselKind::I, nu, z, terms);
        CHECK(std::abs(v.value - exact_i) <= 10.0 * v.truncation);
      }
    }
  }
}

TEST_CASE("large-argument K against the Hankel expansion") {
  const double nu = 30.0, z = 15.0, x = nu * z;
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60 && std::abs(term) > 1e-18; ++k) {
    term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
    sum += term;
  }
  const double hankel = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x) * sum;
  const UniformValue v = uniform_expansion(BesselKind::K, nu, z, 4);
  CHECK(v.value / hankel == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(modified_bessel(nu, x).k_val / hankel == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(modified_bessel(std::nan(""), 1.0), InvalidArgument);
  CHECK_THROWS_AS(modified_bessel(1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(modified_bessel(-1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(modified_bessel(2e4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(modified_bessel(1.0, 800.0, false), OverflowError);
  CHECK_NOTHROW(modified_bessel(1.0, 800.0, true));
}
