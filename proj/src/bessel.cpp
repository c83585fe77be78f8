#include "conetorsion/bessel.hpp"

#include "conetorsion/errors.hpp"
#include "conetorsion/olverpoly.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace conetorsion {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

struct KPair {
  double k_mu;   // K_mu
  double k_mu1;  // K_{mu+1}
};

// Temme's series for |mu| <= 1/2, x < 2. Unscaled.
KPair temme_k(double mu, double x) {
  const double pi = std::numbers::pi;
  const double x2 = 0.5 * x;
  const double pimu = pi * mu;
  const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;

  const double gp = 1.0 + boost::math::tgamma1pm1(mu);   // Gamma(1+mu)
  const double gm = 1.0 + boost::math::tgamma1pm1(-mu);  // Gamma(1-mu)
  const double gampl = 1.0 / gp;
  const double gammi = 1.0 / gm;
  double gam1;
  if (std::abs(mu) < 1e-300) {
    gam1 = -std::numbers::egamma;
  } else {
    gam1 = (boost::math::tgamma1pm1(mu) - boost::math::tgamma1pm1(-mu)) / (2.0 * mu * gp * gm);
  }
  const double gam2 = 0.5 * (gammi + gampl);

  double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / gampl;
  double q = 0.5 / (e * gammi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  const double mu2 = mu * mu;
  for (int i = 1; i < 10000; ++i) {
    ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
    c *= d / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    const double del1 = c * (p - i * ff);
    sum1 += del1;
    if (std::abs(del) < std::abs(sum) * kEps) return {sum, sum1 * 2.0 / x};
  }
  throw Error("modified_bessel: Temme series did not converge");
}

// Steed's CF2 for x >= 2. Returns K scaled by e^{x}.
KPair steed_k_scaled(double mu, double x) {
  const double pi = std::numbers::pi;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i < 100000; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i >= 100000) throw Error("modified_bessel: CF2 did not converge");
  h = a1 * h;
  const double kmu = std::sqrt(pi / (2.0 * x)) / s;
  const double kmu1 = kmu * (mu + x + 0.5 - h) / x;
  return {kmu, kmu1};
}

}  // namespace

BesselQuad modified_bessel(double nu, double x, bool scaled) {
  if (std::isnan(nu) || std::isnan(x)) throw InvalidArgument("modified_bessel: NaN input");
  if (nu < 0.0) throw InvalidArgument("modified_bessel: order must be >= 0");
  if (!(x > 0.0) || std::isinf(x)) throw InvalidArgument("modified_bessel: argument must be finite and > 0");
  if (nu > kBesselMaxOrder)
    throw InvalidArgument("modified_bessel: order " + std::to_string(nu) + " above 1e4, use uniform_expansion");
  if (!scaled && x > kBesselMaxUnscaledArg)
    throw OverflowError("modified_bessel: unscaled evaluation overflows for x > 700");

  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;

  // CF1: h = I'_nu / I_nu.
  double h = nu * xi;
  if (h < kTiny) h = kTiny;
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  const int maxit = 100000 + static_cast<int>(4.0 * x);
  int it = 1;
  for (; it <= maxit; ++it) {
    b += xi2;
    d = 1.0 / (b + d);
    c = b + 1.0 / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 2.0 * kEps) break;
  }
  if (it > maxit) throw Error("modified_bessel: CF1 did not converge");

  // Downward recurrence from nu to mu with an unnormalized start.
  double ril = 1e-280;
  double ripl = h * ril;
  double ril1 = ril;
  double rip1 = ripl;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double ritemp = fact * ril + ripl;
    fact -= xi;
    ripl = fact * ritemp + ril;
    ril = ritemp;
    if (std::abs(ril) > 1e250) {
      ril *= 1e-250;
      ripl *= 1e-250;
      ril1 *= 1e-250;
      rip1 *= 1e-250;
    }
  }
  const double f = ripl / ril;

  // K_mu, K_{mu+1}, in the scaling chosen for the internal path.
  const bool internal_scaled = x >= 2.0;
  KPair kp = internal_scaled ? steed_k_scaled(mu, x) : temme_k(mu, x);
  double rkmu = kp.k_mu;
  double rk1 = kp.k_mu1;
  const double rkmup = mu * xi * rkmu - rk1;
  // Wronskian: I_mu in the same scaling as K (inverse exponential).
  const double rimu = xi / (f * rkmu - rkmup);
  double ri = rimu * ril1 / ril;
  double rip = rimu * rip1 / ril;

  for (int i = 1; i <= nl; ++i) {
    const double rktemp = (mu + i) * xi2 * rk1 + rkmu;
    rkmu = rk1;
    rk1 = rktemp;
  }
  double rk = rkmu;
  double rkp = nu * xi * rkmu - rk1;
  if (!std::isfinite(rk) || !std::isfinite(rkp))
    throw OverflowError("modified_bessel: K overflows at nu=" + std::to_string(nu) + ", x=" + std::to_string(x));

  BesselQuad out;
  out.scaled = scaled;
  if (scaled == internal_scaled) {
    out.i_val = ri;
    out.i_prime = rip;
    out.k_val = rk;
    out.k_prime = rkp;
  } else if (scaled) {
    const double ex = std::exp(x);
    const double emx = std::exp(-x);
    out.i_val = ri * emx;
    out.i_prime = rip * emx;
    out.k_val = rk * ex;
    out.k_prime = rkp * ex;
  } else {
    const double ex = std::exp(x);
    const double emx = std::exp(-x);
    out.i_val = ri * ex;
    out.i_prime = rip * ex;
    out.k_val = rk * emx;
    out.k_prime = rkp * emx;
  }
  if (!std::isfinite(out.i_val) || !std::isfinite(out.i_prime))
    throw OverflowError("modified_bessel: I overflows at nu=" + std::to_string(nu) + ", x=" + std::to_string(x));
  if (!std::isfinite(out.k_val) || !std::isfinite(out.k_prime))
    throw OverflowError("modified_bessel: K overflows at nu=" + std::to_string(nu) + ", x=" + std::to_string(x));
  return out;
}

BesselQuad small_argument_leading(double nu, double z) {
  if (!(nu > 0.0)) throw InvalidArgument("small_argument_leading: order must be > 0");
  if (!(z > 0.0)) throw InvalidArgument("small_argument_leading: argument must be > 0");
  const double lg = std::lgamma(nu);
  const double log_half_z = std::log(0.5 * z);
  BesselQuad out;
  // I ~ (z/2)^nu / Gamma(nu+1), K ~ Gamma(nu)/2 * (z/2)^{-nu}
  out.i_val = std::exp(nu * log_half_z - lg - std::log(nu));
  out.i_prime = out.i_val * nu / z;
  out.k_val = 0.5 * std::exp(lg - nu * log_half_z);
  out.k_prime = -out.k_val * nu / z;
  if (!std::isfinite(out.k_val)) throw OverflowError("small_argument_leading: K overflows");
  return out;
}

UniformValue uniform_expansion(BesselKind kind, double nu, double z, int terms) {
  if (!(z > 0.0)) throw InvalidArgument("uniform_expansion: argument must be > 0");
  if (terms < 0) throw InvalidArgument("uniform_expansion: negative term count");
  if (terms + 1 > olver_max_order())
    throw InvalidArgument("uniform_expansion: term count exceeds the Olver polynomial maximum order");
  const double pi = std::numbers::pi;
  const double root = std::sqrt(1.0 + z * z);
  const double t = 1.0 / root;
  const double xi = root + std::log(z / (1.0 + root));
  const bool is_i = kind == BesselKind::I || kind == BesselKind::IPrime;
  const bool deriv = kind == BesselKind::IPrime || kind == BesselKind::KPrime;

  double pref;
  if (is_i) {
    pref = std::exp(nu * xi) / std::sqrt(2.0 * pi * nu);
  } else {
    pref = std::sqrt(pi / (2.0 * nu)) * std::exp(-nu * xi);
  }
  if (deriv) {
    pref *= std::sqrt(root) / z;
    if (!is_i) pref = -pref;
  } else {
    pref /= std::sqrt(root);
  }

  double sum = 0.0;
  double next = 0.0;
  double scale = 1.0;
  for (int r = 0; r <= terms + 1; ++r) {
    const CoeffPolynomial& poly = deriv ? olver_v(r) : olver_u(r);
    double term = poly.eval(t) * scale;
    if (!is_i && (r % 2 == 1)) term = -term;
    if (r <= terms) {
      sum += term;
    } else {
      next = term;
    }
    scale /= nu;
  }
  return {pref * sum, std::abs(pref * next)};
}

}  // namespace conetorsion
