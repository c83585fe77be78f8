#include "conetorsion/errors.hpp"
#include "conetorsion/special.hpp"
#include "conetorsion/zeta.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conetorsion {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) { return std::tgamma(n + 1.0); }

constexpr double kMaxImages = 4e6;

}  // namespace

FirstOrderOracle first_order_mellin_oracle(const CrossSection& cs, int k, double split) {
  if (cs.family != Family::flat_torus) throw Unsupported("first_order_mellin_oracle: flat tori only");
  const int n = cs.dim;
  if (k < 0 || k > n - 1) throw InvalidArgument("first_order_mellin_oracle: degree out of range");
  if (!(split > 0.0)) throw InvalidArgument("first_order_mellin_oracle: split must be > 0");
  const int p = n / 2;
  const double alpha = 0.5 * (n - 1) - k;
  const double beta = std::abs(alpha);
  const double a = static_cast<double>(cs.rank * binomial(n - 1, k));
  const double vol = cs.volume;

  // K_{p+1/2}(z) = sqrt(pi/(2z)) e^{-z} sum_j c_j (2z)^{-j}
  std::vector<double> cj(p + 1);
  for (int j = 0; j <= p; ++j) cj[j] = factorial(p + j) / (factorial(j) * factorial(p - j));
  const double pref = 2.0 * std::pow(beta / (2.0 * kPi), p + 0.5);

  // Real lattice shells for the Poisson kernel, which decays like e^{-beta |l|}.
  const double radius = 48.0 / beta + 2.0;
  const double ball = std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  if (ball * std::pow(radius, n) / vol > kMaxImages) {
    throw Unsupported("first_order_mellin_oracle: about " + std::to_string(ball * std::pow(radius, n) / vol) +
                      " real-space images needed; the oracle is practical for n = 2");
  }
  std::vector<double> norms = cs.geometry->real_norms(radius);
  std::sort(norms.begin(), norms.end());
  std::vector<double> shell_r2;
  std::vector<double> shell_count;
  for (double q : norms) {
    if (!shell_r2.empty() && std::abs(q - shell_r2.back()) <= 1e-12 * (1.0 + q)) {
      shell_count.back() += 1.0;
    } else {
      shell_r2.push_back(q);
      shell_count.push_back(1.0);
    }
  }

  // sum_{l != 0} P_t(l), the massive Poisson kernel of e^{-t sqrt(|xi|^2 + beta^2)}.
  auto kernel_sum = [&](double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < shell_r2.size(); ++i) {
      const double rho = std::sqrt(t * t + shell_r2[i]);
      const double z = beta * rho;
      double poly = 0.0;
      double zp = 1.0;
      for (int j = 0; j <= p; ++j) {
        poly += cj[j] * zp;
        zp /= 2.0 * z;
      }
      const double kv = std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * poly;
      s += shell_count[i] * pref * t * kv / std::pow(rho, p + 0.5);
    }
    return s;
  };

  // Levels for the t >= split part.
  const double nu_max = 46.0 / split + beta;
  const double cutoff = nu_max * nu_max - alpha * alpha;
  std::vector<double> etas = cs.geometry->dual_norms(cutoff);
  std::sort(etas.begin(), etas.end());
  const double per_point = a;

  FirstOrderOracle out;
  double err_total = 0.0;
  for (int sign : {+1, -1}) {
    const double c = beta + sign * alpha;
    // Main part: a e^{-c t} [Vol (beta/2pi)^p sum_j c_j (2 beta)^{-j} t^{-(p+j)} - 1].
    std::vector<std::pair<double, int>> pieces;  // (amplitude, q) for amplitude * t^{-q}
    for (int j = 0; j <= p; ++j)
      pieces.emplace_back(a * vol * std::pow(beta / (2.0 * kPi), p) * cj[j] * std::pow(2.0 * beta, -j), p + j);
    pieces.emplace_back(-a, 0);

    double coeff = 0.0;
    double fp = 0.0;
    const double log_t = std::log(split);
    for (const auto& [amp, q] : pieces) {
      // int_0^T t^{s-1-q} e^{-c t} dt = sum_i (-c)^i / i! T^{s-q+i} / (s-q+i)
      double ci = amp;
      for (int i = 0; i < 400; ++i) {
        const int e = i - q;
        if (e == 0) {
          coeff += ci;
          fp += ci * log_t;
        } else {
          const double piece = ci * std::pow(split, e) / e;
          fp += piece;
          if (e > 0 && std::abs(piece) < 1e-20) break;
        }
        if (c == 0.0 && i >= q) break;
        ci *= -c / (i + 1);
      }
    }

    auto integrand = [&](double t) { return a * vol * std::exp(-sign * alpha * t) * kernel_sum(t) / t; };
    double qerr = 0.0;
    const double qv =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, split, 20, 1e-14, &qerr);
    fp += qv;

    KahanSum u;
    for (double eta : etas) {
      const double lam = std::sqrt(eta + alpha * alpha) + sign * alpha;
      u.add(per_point * boost::math::expint(1, lam * split));
    }
    fp += u.value();

    const double z0 = coeff;
    const double zp = fp + std::numbers::egamma * coeff;
    if (sign > 0) {
      out.zeta0_plus = z0;
      out.prime0_plus = zp;
    } else {
      out.zeta0_minus = z0;
      out.prime0_minus = zp;
    }
    err_total = std::max(err_total, std::abs(qerr) + 1e-15 * std::abs(fp));
  }
  out.error = err_total;
  return out;
}

}  // namespace conetorsion
