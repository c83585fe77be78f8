#include "conetorsion/zeta.hpp"

#include "conetorsion/errors.hpp"
#include "conetorsion/special.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

namespace conetorsion {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

constexpr double kIntTol = 1e-12;

bool near_integer(double x, long& out) {
  const double r = std::round(x);
  if (std::abs(x - r) < kIntTol) {
    out = static_cast<long>(r);
    return true;
  }
  return false;
}

// Gamma(sigma) zeta(sigma) with zeta(sigma) = sum m nu^{-2 sigma}, split at T:
//   G = S1 + S2 + Q + U
//   S1 = W sum_j (-a^2)^j T^{sigma-p+j} / (j! (sigma-p+j))
//   S2 = -a0 sum_j (-a^2)^j T^{sigma+j} / (j! (sigma+j))
//   Q  = int_0^T t^{sigma-1} R(t) dt
//   U  = sum m nu^{-2 sigma} Gamma(sigma, nu^2 T)
// Near a simple pole sigma0: G = c/(sigma-sigma0) + fp + O(sigma-sigma0).
struct MellinParts {
  bool singular = false;
  double coeff = 0.0;  // c
  double fp = 0.0;     // finite part (or plain value when regular)
  double error = 0.0;
};

class Mellin {
 public:
  explicit Mellin(const SpectralSlice& slice) : slice_(slice) {
    if (!slice.heat) throw InvalidArgument("zeta: slice has no heat coefficients");
    if (!slice.geometry || !slice.heat->closed_form)
      throw Unsupported("experimental-unsupported: Mellin continuation needs torus geometry");
    half_ = slice.dim / 2;
    weyl_ = slice.heat->weyl;
    zero_mode_ = slice.heat->zero_mode;
    alpha_sq_ = slice.alpha * slice.alpha;
    split_ = slice.split_point();
  }

  MellinParts at(double sigma) const {
    MellinParts out;
    long sigma0 = 0;
    const bool integral = near_integer(sigma, sigma0);
    if (integral) sigma = static_cast<double>(sigma0);
    const double log_t = std::log(split_);

    // amp * sum_j (-a^2)^j / j! * T^{e_j} / e_j with e_j = sigma + shift + j.
    auto series = [&](double amp, double shift) {
      double s = 0.0;
      double coef = amp;
      for (int j = 0; j < 400; ++j) {
        const double e = sigma + shift + j;
        long e0 = 0;
        if (integral && near_integer(e, e0) && e0 == 0) {
          out.singular = true;
          out.coeff += coef;
          out.fp += coef * log_t;
        } else {
          const double piece = coef * std::pow(split_, e) / e;
          s += piece;
          if (j > 4 && e > 0.0 && std::abs(piece) < 1e-20 * (1.0 + std::abs(s))) break;
        }
        coef *= -alpha_sq_ / (j + 1);
      }
      return s;
    };
    out.fp += series(weyl_, -static_cast<double>(half_));
    out.fp += series(-zero_mode_, 0.0);

    double qerr = 0.0;
    out.fp += remainder_integral(sigma, qerr);
    double uerr = 0.0;
    out.fp += direct_part(sigma, uerr);
    out.error = qerr + uerr;
    return out;
  }

  // Per shell c = |l|^2/4, expanding e^{-a^2 t}:
  //   int_0^T t^{b-1} e^{-c/t} dt = c^b Gamma(-b, c/T).
  double remainder_integral(double sigma, double& err) const {
    const TorusGeometry& g = *slice_.geometry;
    const auto& norms = g.shell_norms_sq();
    const auto& counts = g.shell_counts();
    KahanSum total;
    for (std::size_t i = 0; i < norms.size(); ++i) {
      const double c = 0.25 * norms[i];
      const double x = c / split_;
      const double log_c = std::log(c);
      double coef = 1.0;
      double shell = 0.0;
      for (int j = 0; j < 200; ++j) {
        const double b = sigma - half_ + j;
        const double piece = coef * std::exp(b * log_c) * upper_gamma(-b, x);
        shell += piece;
        if (j > 2 && std::abs(piece) <= 1e-18 * std::abs(shell)) break;
        coef *= -alpha_sq_ / (j + 1);
      }
      total.add(static_cast<double>(counts[i]) * shell);
    }
    const double v = weyl_ * total.value();
    // Omitted shells lie beyond |l|^2 = 4 T 46.
    err = 1e-15 * std::abs(v) + std::abs(weyl_) * 1e-19;
    return v;
  }

  double direct_part(double sigma, double& err) const {
    KahanSum s;
    for (std::size_t i = 0; i < slice_.levels.size(); ++i) {
      const double nu2 = slice_.levels[i].eta + alpha_sq_;
      s.add(static_cast<double>(slice_.levels[i].mult) * term(sigma, nu2));
    }
    err = tail_bound(sigma) + 1e-16 * std::abs(s.value());
    return s.value();
  }

  double term(double sigma, double nu2) const {
    const double g = upper_gamma(sigma, nu2 * split_);
    if (g == 0.0) return 0.0;
    return g * std::exp(-sigma * std::log(nu2));
  }

  // Upper bound for the omitted levels eta > cutoff in U.
  double tail_bound(double sigma) const {
    const TailModel& tm = slice_.tail;
    const double step = 1.0 / split_;
    double lo = slice_.cutoff;
    double total = 0.0;
    for (int j = 0; j < 100000; ++j) {
      const double hi = lo + step;
      const double count = std::max(0.0, tm.count_upper(hi) - tm.count_lower(lo));
      const double piece = count * term(sigma, lo + alpha_sq_);
      total += piece;
      if (j > 3 && piece < 1e-30 * std::max(1.0, total)) break;
      lo = hi;
    }
    return total;
  }

  const SpectralSlice& slice() const { return slice_; }
  int half() const { return half_; }

 private:
  const SpectralSlice& slice_;
  int half_ = 1;
  double weyl_ = 0.0;
  double zero_mode_ = 0.0;
  double alpha_sq_ = 0.0;
  double split_ = 1.0;
};

}  // namespace

ZetaValue zeta_mellin(const SpectralSlice& slice, double s, PoleMode mode) {
  if (!std::isfinite(s)) throw InvalidArgument("zeta_mellin: s must be finite");
  Mellin mel(slice);
  const double sigma = 0.5 * s;
  const MellinParts parts = mel.at(sigma);
  ZetaValue out;
  long sigma0 = 0;
  if (near_integer(sigma, sigma0)) {
    if (sigma0 <= 0) {
      // 1/Gamma has a simple zero: zeta = c (-1)^p p!.
      const long p = -sigma0;
      out.value = parts.coeff * ((p % 2 == 0) ? 1.0 : -1.0) * std::tgamma(p + 1.0);
      out.error = 1e-15 * std::abs(out.value);
      return out;
    }
    const double g = std::tgamma(static_cast<double>(sigma0));
    if (parts.singular && parts.coeff != 0.0) {
      if (mode == PoleMode::reject)
        throw PoleError("zeta_mellin: s = " + num(s) + " is a pole (use finite_part mode)");
      out.pole = true;
      out.residue = 2.0 * parts.coeff / g;
      out.value = (parts.fp - parts.coeff * digamma_int(static_cast<int>(sigma0))) / g;
    } else {
      out.value = parts.fp / g;
    }
    out.error = parts.error / g;
    return out;
  }
  const double g = std::tgamma(sigma);
  out.value = parts.fp / g;
  out.error = parts.error / std::abs(g);
  return out;
}

std::map<int, double> zeta_residues(const SpectralSlice& slice) {
  if (!slice.heat) throw InvalidArgument("zeta_residues: missing heat coefficients");
  std::map<int, double> res;
  const int half = slice.dim / 2;
  for (int r = 1; r <= half; ++r) res[r] = 2.0 * slice.heat->coefficient(half - r) / std::tgamma(r);
  return res;
}

double zeta_residue_at(const SpectralSlice& slice, int s) {
  if (s < 2 || s % 2 != 0 || s > slice.dim) return 0.0;
  return zeta_residues(slice).at(s / 2);
}

Zeta0 zeta0_and_prime0(const SpectralSlice& slice) {
  Mellin mel(slice);
  const MellinParts parts = mel.at(0.0);
  Zeta0 z;
  z.zeta0 = parts.coeff;
  z.zeta_prime0 = 0.5 * (parts.fp + std::numbers::egamma * parts.coeff);
  z.error = 0.5 * parts.error;
  return z;
}

namespace {

int resolve_order(const SpectralSlice& slice, int order) {
  if (order == 0) return slice.dim;
  if (order < slice.dim) throw InvalidArgument("subtraction order must be >= n");
  return order;
}

// sum_{r > order} x^r / r, valid for |x| < 1.
double log_tail(double x, int order) {
  if (std::abs(x) < 0.5) {
    double s = 0.0;
    double p = std::pow(x, order + 1);
    for (int r = order + 1; r < 2000; ++r) {
      const double piece = p / r;
      s += piece;
      if (std::abs(piece) < 1e-18 * std::abs(s)) break;
      p *= x;
    }
    return s;
  }
  double s = -std::log1p(-x);
  double p = x;
  for (int r = 1; r <= order; ++r) {
    s -= p / r;
    p *= x;
  }
  return s;
}

KSeries k_series_cached(const SpectralSlice& slice, int sign, int order, double tolerance,
                        std::map<int, ZetaValue>& zcache) {
  if (sign != 1 && sign != -1) throw InvalidArgument("k_series: sign must be +1 or -1");
  KSeries out;
  const double a = slice.alpha;
  if (a == 0.0) return out;
  const double x_sign = -sign * a;  // the series variable is (-+alpha)/nu

  KahanSum direct;
  for (std::size_t i = 0; i < slice.levels.size(); ++i) {
    const double nu = slice.nu(i);
    direct.add(static_cast<double>(slice.levels[i].mult) * log_tail(x_sign / nu, order));
  }
  out.direct = direct.value();

  const double nu_c = std::sqrt(slice.cutoff + a * a);
  const double q = std::abs(a) / nu_c;
  if (q >= 0.5) {
    const double need = 4.0 * a * a - a * a;
    throw CutoffInsufficient("k_series: cutoff " + num(slice.cutoff) +
                                 " too small for the tail series; need at least " + num(need),
                             need);
  }

  auto zeta_at = [&](int r) -> const ZetaValue& {
    auto it = zcache.find(r);
    if (it == zcache.end()) it = zcache.emplace(r, zeta_mellin(slice, r)).first;
    return it->second;
  };
  auto partial = [&](int r) {
    KahanSum p;
    for (std::size_t i = 0; i < slice.levels.size(); ++i)
      p.add(static_cast<double>(slice.levels[i].mult) * std::pow(slice.nu(i), -r));
    return p.value();
  };

  KahanSum tail;
  double err = 0.0;
  double first_tail = 0.0;
  int r = order + 1;
  for (; r < order + 400; ++r) {
    const ZetaValue& z = zeta_at(r);
    const double zt = z.value - partial(r);
    if (r == order + 1) first_tail = std::abs(zt);
    const double coef = std::pow(x_sign, r) / r;
    tail.add(coef * zt);
    err += std::abs(coef) * (z.error + 1e-16 * std::abs(z.value));
    // Remaining terms: zeta_tail(j) <= nu_c^{-(j-order-1)} zeta_tail(order+1).
    const double rest = std::pow(std::abs(a), r + 1) / (r + 1) * first_tail * std::pow(nu_c, -(r - order)) / (1.0 - q);
    ++out.tail_terms;
    if (rest < 0.01 * tolerance && rest < 1e-16) break;
    if (rest < 1e-17) break;
  }
  const double rest = std::pow(std::abs(a), r + 1) / (r + 1) * first_tail * std::pow(nu_c, -(r - order)) / (1.0 - q);
  out.tail = tail.value();
  out.value = out.direct + out.tail;
  out.error = err + rest + 1e-16 * std::abs(out.direct) * 4.0;
  if (out.error > tolerance) {
    const double need = 4.0 * slice.cutoff;
    throw CutoffInsufficient("k_series: error estimate " + num(out.error) + " exceeds tolerance " +
                                 num(tolerance) + "; try cutoff " + num(need),
                             need);
  }
  return out;
}

}  // namespace

KSeries k_series(const SpectralSlice& slice, int sign, int order, double tolerance) {
  std::map<int, ZetaValue> cache;
  return k_series_cached(slice, sign, resolve_order(slice, order), tolerance, cache);
}

ZetaEval evaluate_zeta(const SpectralSlice& slice, const ZetaOptions& opts) {
  const int order = resolve_order(slice, opts.order);
  ZetaEval ev;
  ev.k = slice.k;
  ev.alpha = slice.alpha;
  ev.cutoff = slice.cutoff;
  ev.order = order;
  ev.residues = zeta_residues(slice);

  const Zeta0 z0 = zeta0_and_prime0(slice);
  ev.zeta0 = z0.zeta0;
  ev.zeta_prime0 = z0.zeta_prime0;
  ev.err.zeta0 = 1e-15 * std::abs(z0.zeta0);
  ev.err.zeta_prime0 = z0.error;
  ev.err.residues = 1e-15;

  std::map<int, ZetaValue> zcache;
  double pp_err = 0.0;
  for (int r = 1; r <= order; ++r) {
    const ZetaValue v = zeta_mellin(slice, r, PoleMode::finite_part);
    ev.pp_values[r] = v.value;
    pp_err = std::max(pp_err, v.error);
    if (!v.pole) zcache.emplace(r, v);
  }
  ev.err.pp_values = pp_err;

  const KSeries kp = k_series_cached(slice, +1, order, opts.tolerance, zcache);
  const KSeries km = k_series_cached(slice, -1, order, opts.tolerance, zcache);
  ev.k_plus = kp.value;
  ev.k_minus = km.value;
  ev.err.k_series = std::max(kp.error, km.error);

  for (int sign : {+1, -1}) {
    const double x = -sign * slice.alpha;
    double s0 = ev.zeta0;
    double s1 = ev.zeta_prime0 + (sign > 0 ? ev.k_plus : ev.k_minus);
    double e1 = ev.err.zeta_prime0 + ev.err.k_series;
    for (int r = 1; r <= order; ++r) {
      const double c = std::pow(x, r) / r;
      const double res = zeta_residue_at(slice, r);
      s0 += c * res;
      // gamma + psi(r) = H_{r-1}, exactly.
      const double h = static_cast<double>(harmonic_number(r - 1));
      s1 += c * (res * h + ev.pp_values[r]);
      e1 += std::abs(c) * pp_err;
    }
    if (sign > 0) {
      ev.shifted0_plus = s0;
      ev.shifted_prime0_plus = s1;
    } else {
      ev.shifted0_minus = s0;
      ev.shifted_prime0_minus = s1;
    }
    ev.err.shifted_prime0 = std::max(ev.err.shifted_prime0, e1);
  }
  ev.err.shifted0 = 1e-15 * (1.0 + std::abs(ev.zeta0));
  return ev;
}

double shifted_zeta0(const SpectralSlice& slice, int sign, const ZetaOptions& opts) {
  const int order = resolve_order(slice, opts.order);
  Zeta0 z0 = zeta0_and_prime0(slice);
  double s0 = z0.zeta0;
  for (int r = 1; r <= order; ++r) s0 += std::pow(-sign * slice.alpha, r) / r * zeta_residue_at(slice, r);
  return s0;
}

double shifted_zeta_prime0(const SpectralSlice& slice, int sign, const ZetaOptions& opts) {
  return evaluate_zeta(slice, opts).shifted_prime0(sign);
}

}  // namespace conetorsion
