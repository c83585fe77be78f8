#include "conetorsion/bessel.hpp"
#include "conetorsion/errors.hpp"
#include "conetorsion/olverpoly.hpp"
#include "conetorsion/torsion.hpp"

#include <cmath>
#include <string>

namespace conetorsion {

namespace {

bool is_truncated(ModelKind k) {
  return k == ModelKind::psi_truncated || k == ModelKind::phi_truncated || k == ModelKind::harmonic_H0;
}

bool is_phi(ModelKind k) { return k == ModelKind::phi_full || k == ModelKind::phi_truncated; }

void check_eps(double eps) {
  if (!std::isfinite(eps) || eps <= 0.0 || eps >= 1.0) {
    throw InvalidArgument("epsilon must lie in (0,1), got " + std::to_string(eps));
  }
}

void validate(const ModelOperatorSpec& spec, double z) {
  if (!std::isfinite(z) || z < 0.0) throw InvalidArgument("z must be finite and non-negative");
  if (!std::isfinite(spec.alpha)) throw InvalidArgument("alpha must be finite");
  if (is_truncated(spec.kind)) check_eps(spec.eps);
  if (spec.kind == ModelKind::harmonic_H0) {
    if (spec.alpha == 0.0) throw DomainError("harmonic_H0 needs alpha != 0");
    return;
  }
  if (!std::isfinite(spec.nu) || spec.nu <= 0.0) throw InvalidArgument("nu must be positive");
  if (spec.nu <= std::abs(spec.alpha)) {
    throw PoleError("nu <= |alpha|: the (nu^2 - alpha^2) prefactor vanishes");
  }
}

double log_full_ratio(double nu, double a, double z) {
  const double w = nu * z;
  const BesselQuad q = modified_bessel(nu, w, true);
  const double as = w * q.i_prime + a * q.i_val;
  if (!(as > 0.0)) throw DomainError("wI' + alpha I is not positive");
  return nu * std::log(2.0) + std::lgamma(nu) - nu * std::log(w) - std::log1p(a / nu) + w + std::log(as);
}

// X = (B/A)(A_eps/B_eps) with the exponential scales collected.
double cross_ratio(double nu, double a, double w, double eps) {
  const BesselQuad q1 = modified_bessel(nu, w, true);
  const BesselQuad qe = modified_bessel(nu, w * eps, true);
  const double A = w * q1.i_prime + a * q1.i_val;
  const double B = w * q1.k_prime + a * q1.k_val;
  const double Ae = w * eps * qe.i_prime + a * qe.i_val;
  const double Be = w * eps * qe.k_prime + a * qe.k_val;
  return std::exp(-2.0 * w * (1.0 - eps)) * (B / A) * (Ae / Be);
}

double log_truncated_ratio(double nu, double a, double z, double eps) {
  const double w = nu * z;
  const double we = w * eps;
  const BesselQuad q1 = modified_bessel(nu, w, true);
  const BesselQuad qe = modified_bessel(nu, we, true);
  const double A = w * q1.i_prime + a * q1.i_val;
  const double B = w * q1.k_prime + a * q1.k_val;
  const double Ae = we * qe.i_prime + a * qe.i_val;
  const double Be = we * qe.k_prime + a * qe.k_val;
  if (!(A > 0.0) || !(Be < 0.0)) throw DomainError("truncated bracket has unexpected sign");
  const double X = std::exp(-2.0 * w * (1.0 - eps)) * (B / A) * (Ae / Be);
  if (!(X < 1.0)) throw DomainError("truncated bracket factor 1 - X is not positive");
  const double log_eps = std::log(eps);
  // log(eps^{-nu} - eps^{nu})
  const double log_den = -nu * log_eps + std::log1p(-std::exp(2.0 * nu * log_eps));
  return std::log(2.0 * nu) + (w + std::log(A)) + (-we + std::log(-Be)) + std::log1p(-X) -
         std::log((nu - a) * (nu + a)) - log_den;
}

double log_harmonic_ratio(double a, double z, double eps) {
  const double w = a * z;
  const double we = w * eps;
  const BesselQuad q1 = modified_bessel(a, w, true);
  const BesselQuad qe = modified_bessel(a, we, true);
  // I(w)K(we) - K(w)I(we) = e^{w(1-eps)} I_s(w) K_s(we) (1 - e^{-2w(1-eps)} K_s(w) I_s(we) / (I_s(w) K_s(we)))
  const double lead = q1.i_val * qe.k_val;
  const double r = std::exp(-2.0 * w * (1.0 - eps)) * q1.k_val * qe.i_val / lead;
  const double log_eps = std::log(eps);
  const double log_den = -a * log_eps + std::log1p(-std::exp(2.0 * a * log_eps));
  return std::log(2.0 * a) + w * (1.0 - eps) + std::log(lead) + std::log1p(-r) - log_den;
}

}  // namespace

double model_det_ratio(const ModelOperatorSpec& spec, double z) {
  validate(spec, z);
  if (z == 0.0) return 1.0;
  double lr = 0.0;
  switch (spec.kind) {
    case ModelKind::psi_full:
    case ModelKind::phi_full:
      lr = log_full_ratio(spec.nu, is_phi(spec.kind) ? -spec.alpha : spec.alpha, z);
      break;
    case ModelKind::psi_truncated:
    case ModelKind::phi_truncated:
      lr = log_truncated_ratio(spec.nu, is_phi(spec.kind) ? -spec.alpha : spec.alpha, z, spec.eps);
      break;
    case ModelKind::harmonic_H0:
      lr = log_harmonic_ratio(std::abs(spec.alpha), z, spec.eps);
      break;
  }
  if (lr > 709.0) throw OverflowError("determinant ratio overflows double precision");
  return std::exp(lr);
}

double harmonic_det(double alpha, double eps) {
  if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");
  if (alpha == 0.0) throw DomainError("harmonic_det is undefined at alpha = 0 (logarithmic boundary case)");
  check_eps(eps);
  const double a = std::abs(alpha);
  return std::sqrt(eps) / a * (std::pow(eps, -a) - std::pow(eps, a));
}

double t_large_nu_series(double nu, double alpha, double eps, double lambda, int order) {
  if (lambda > 0.0) throw InvalidArgument("lambda must be <= 0");
  const double te = 1.0 / std::sqrt(1.0 - eps * eps * lambda);
  double sum = 0.0;
  for (int r = 1; r <= order; ++r) {
    const CoeffPolynomial& m = m_poly(r);
    const double f = m.eval(te, -alpha) - m.eval(te, alpha) +
                     (std::pow(alpha, r) - std::pow(-alpha, r)) / r;
    sum += f / std::pow(-nu, r);
  }
  return sum;
}

TEta t_eta_lambda(double nu, double alpha, double eps, double lambda, int n) {
  if (!std::isfinite(nu) || !std::isfinite(alpha) || !std::isfinite(lambda)) {
    throw InvalidArgument("t_eta_lambda arguments must be finite");
  }
  check_eps(eps);
  if (lambda >= 0.0) throw InvalidArgument("lambda must be negative");
  if (n < 1) throw InvalidArgument("order n must be positive");
  if (nu <= std::abs(alpha)) throw PoleError("t_eta_lambda needs nu > |alpha|");

  const double w = nu * std::sqrt(-lambda);
  const double we = w * eps;
  const BesselQuad qe = modified_bessel(nu, we, true);
  const double bp = we * qe.k_prime + alpha * qe.k_val;  // scaled B_{+,eps}
  const double bm = we * qe.k_prime - alpha * qe.k_val;
  const double ratio = bm / bp;
  const double one_m_xp = 1.0 - cross_ratio(nu, alpha, w, eps);
  const double one_m_xm = 1.0 - cross_ratio(nu, -alpha, w, eps);
  if (!(ratio > 0.0) || !(one_m_xp > 0.0) || !(one_m_xm > 0.0)) {
    throw DomainError("non-positive logarithm argument in t(lambda); epsilon too large");
  }
  TEta out;
  out.t = std::log(ratio) - std::log1p(alpha / nu) + std::log1p(-alpha / nu) - std::log(one_m_xp) +
          std::log(one_m_xm);
  out.p = out.t - t_large_nu_series(nu, alpha, eps, lambda, n);
  return out;
}

double ab_constant(double nu, double alpha, int n) {
  if (nu <= std::abs(alpha)) throw PoleError("ab_constant needs nu > |alpha|");
  double b = std::log1p(-alpha / nu) - std::log1p(alpha / nu);
  for (int r = 1; r <= n; ++r) {
    b -= (std::pow(alpha, r) - std::pow(-alpha, r)) / (r * std::pow(-nu, r));
  }
  return b;
}

}  // namespace conetorsion
