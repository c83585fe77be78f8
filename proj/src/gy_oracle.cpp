#include "conetorsion/errors.hpp"
#include "conetorsion/torsion.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>

namespace conetorsion {

namespace {

using State = std::array<double, 2>;
namespace odeint = boost::numeric::odeint;

constexpr double kAbsTol = 1e-300;
constexpr double kRelTol = 1e-13;
constexpr double kMaxExponent = 600.0;

struct Radial {
  double c;   // nu^2 - 1/4
  double w2;  // w^2
  void operator()(const State& y, State& dy, double x) const {
    dy[0] = y[1];
    dy[1] = (c / (x * x) + w2) * y[0];
  }
};

State integrate(double c, double w, State y, double x0, double x1) {
  auto stepper = odeint::make_controlled(kAbsTol, kRelTol, odeint::runge_kutta_fehlberg78<State>());
  const double h0 = (x1 - x0) * 1e-3;
  odeint::integrate_adaptive(stepper, Radial{c, w * w}, y, x0, x1, h0);
  return y;
}

// x f'(x) + beta f(x) at x = eps for the solution with f(1) = 1, x f' + beta f = 0 at 1.
double truncated_functional(double nu, double beta, double w, double eps) {
  if (w * (1.0 - eps) > kMaxExponent) {
    throw StiffnessError("w(1-eps) too large for the ODE oracle; use the scaled Bessel path");
  }
  const State y = integrate(nu * nu - 0.25, w, {1.0, -beta}, 1.0, eps);
  return eps * y[1] + beta * y[0];
}

// Regular solution x^{nu+1/2} sum_j (w^2 x^2/4)^j / (j! (nu+1)_j) near 0, then
// x f' + beta f at x = 1, divided by its w = 0 value nu + 1/2 + beta.
double full_functional_ratio(double nu, double beta, double w) {
  if (w > kMaxExponent) throw StiffnessError("w too large for the ODE oracle");
  const double x0 = std::min(0.05, 0.5 / std::max(w, 1.0));
  const double q = 0.25 * w * w * x0 * x0;
  double term = 1.0, f = 1.0, df = nu + 0.5;  // in units of x0^{nu+1/2}, df holds x f'
  for (int j = 1; j < 200; ++j) {
    term *= q / (j * (nu + j));
    f += term;
    df += term * (nu + 0.5 + 2.0 * j);
    if (term < 1e-18 * f) break;
  }
  // Normalize by x0^{nu+1/2} so the comparison is against x^{nu+1/2} alone.
  const State y = integrate(nu * nu - 0.25, w, {f, df / x0}, x0, 1.0);
  const State y0 = integrate(nu * nu - 0.25, 0.0, {1.0, (nu + 0.5) / x0}, x0, 1.0);
  return (y[1] + beta * y[0]) / (y0[1] + beta * y0[0]);
}

}  // namespace

double gy_det_ratio_oracle(const ModelOperatorSpec& spec, double z) {
  if (!std::isfinite(z) || z < 0.0) throw InvalidArgument("z must be finite and non-negative");
  if (z == 0.0) return 1.0;
  switch (spec.kind) {
    case ModelKind::psi_truncated:
    case ModelKind::phi_truncated: {
      if (!(spec.eps > 0.0 && spec.eps < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
      if (!(spec.nu > 0.0)) throw InvalidArgument("nu must be positive");
      const double a = spec.kind == ModelKind::phi_truncated ? -spec.alpha : spec.alpha;
      const double beta = a - 0.5;
      const double w = spec.nu * z;
      return truncated_functional(spec.nu, beta, w, spec.eps) / truncated_functional(spec.nu, beta, 0.0, spec.eps);
    }
    case ModelKind::psi_full:
    case ModelKind::phi_full: {
      if (!(spec.nu > 0.0)) throw InvalidArgument("nu must be positive");
      const double a = spec.kind == ModelKind::phi_full ? -spec.alpha : spec.alpha;
      return full_functional_ratio(spec.nu, a - 0.5, spec.nu * z);
    }
    case ModelKind::harmonic_H0: {
      if (spec.alpha == 0.0) throw DomainError("harmonic_H0 needs alpha != 0");
      if (!(spec.eps > 0.0 && spec.eps < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
      const double a = std::abs(spec.alpha);
      const double w = a * z;
      if (w * (1.0 - spec.eps) > kMaxExponent) throw StiffnessError("w(1-eps) too large for the ODE oracle");
      // Dirichlet at both ends: y(eps) = 0, y'(eps) = 1, ratio of y(1).
      const State y = integrate(a * a - 0.25, w, {0.0, 1.0}, spec.eps, 1.0);
      const State y0 = integrate(a * a - 0.25, 0.0, {0.0, 1.0}, spec.eps, 1.0);
      return y[0] / y0[0];
    }
  }
  throw InvalidArgument("unknown model kind");
}

double harmonic_det_oracle(double alpha, double eps) {
  if (alpha == 0.0) throw DomainError("harmonic_det is undefined at alpha = 0");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  const double a = std::abs(alpha);
  const State y = integrate(a * a - 0.25, 0.0, {0.0, 1.0}, eps, 1.0);
  return 2.0 * y[0];
}

}  // namespace conetorsion
