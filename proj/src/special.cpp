#include "conetorsion/special.hpp"

#include "conetorsion/errors.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

namespace conetorsion {

namespace {

// Legendre continued fraction, modified Lentz.
double upper_gamma_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return std::exp(-x + a * std::log(x)) * h;
  }
  throw Error("upper_gamma: continued fraction did not converge");
}

}  // namespace

double upper_gamma(double a, double x) {
  if (!(x > 0.0)) throw InvalidArgument("upper_gamma: x must be > 0");
  if (a > 0.0) return boost::math::tgamma(a, x);
  if (x >= 1.0) return upper_gamma_cf(a, x);
  // Small x, a <= 0: step down with Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x}) / a.
  const double frac = a - std::floor(a);
  double cur_a;
  double g;
  if (frac == 0.0) {
    cur_a = 0.0;
    g = boost::math::expint(1, x);
  } else {
    cur_a = frac;
    g = boost::math::tgamma(cur_a, x);
  }
  while (cur_a > a + 0.5) {
    cur_a -= 1.0;
    g = (g - std::exp(cur_a * std::log(x) - x)) / cur_a;
  }
  return g;
}

Rational harmonic_number(int m) {
  Rational h = 0;
  for (int j = 1; j <= m; ++j) h += Rational(1, j);
  return h;
}

double digamma_int(int r) {
  if (r < 1) throw InvalidArgument("digamma_int: r must be >= 1");
  double h = 0.0;
  for (int j = 1; j < r; ++j) h += 1.0 / j;
  return -std::numbers::egamma + h;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace conetorsion
