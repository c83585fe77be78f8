#include "conetorsion/torsion.hpp"

#include "conetorsion/errors.hpp"
#include "conetorsion/olverpoly.hpp"
#include "conetorsion/special.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#ifndef CONETORSION_VERSION
#define CONETORSION_VERSION "0.0.0"
#endif

namespace conetorsion {

namespace {

double sign_pow(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

std::map<int, double> residues_for(const CrossSection& cs, int k) {
  SpectralSlice s;
  s.k = k;
  s.dim = cs.dim;
  s.rank = cs.rank;
  s.alpha = 0.5 * (cs.dim - 1) - k;
  s.heat = theta_heat_coeffs(cs, k);
  return zeta_residues(s);
}

// sum_b (z_{2r,b}(-alpha) - z_{2r,b}(alpha)) psi(b + r)
double z_psi_sum(int r, double alpha) {
  double acc = 0.0;
  for (int b = 0; b <= 2 * r; ++b) {
    const CoeffPolynomial z = z_coeff(2 * r, b);
    acc += (z.eval(0.0, -alpha) - z.eval(0.0, alpha)) * digamma_int(b + r);
  }
  return acc;
}

double residue_double_sum(const CrossSection& cs) {
  const int half = cs.dim / 2;
  double s = 0.0;
  for (int k = 0; k < half; ++k) {
    const double alpha = 0.5 * (cs.dim - 1) - k;
    const auto res = residues_for(cs, k);
    double inner = 0.0;
    for (int r = 1; r <= half; ++r) inner += res.at(r) * z_psi_sum(r, alpha);
    s += sign_pow(k) * inner;
  }
  return s;
}

// sum_{l=0}^{m-1} log(2l+1)
double odd_log_sum(int m) {
  double s = 0.0;
  for (int l = 0; l < m; ++l) s += std::log(2.0 * l + 1.0);
  return s;
}

}  // namespace

double choose_cutoff(const CrossSection& cs, const TorsOptions& opts) {
  if (opts.cutoff > 0.0) return opts.cutoff;
  return default_cutoff(cs, opts.tolerance);
}

double top_term(const CrossSection& cs) {
  const int n = cs.dim;
  double s = 0.5 * std::log(2.0) * static_cast<double>(cs.euler);
  for (int k = 0; k < n / 2; ++k) {
    const double b = static_cast<double>(cs.betti.at(k));
    s -= sign_pow(k) * b * (0.5 * std::log(n - 2.0 * k + 1.0) + odd_log_sum(n / 2 - k));
  }
  return s;
}

std::map<int, SliceContribution> slice_contributions(const CrossSection& cs, const TorsOptions& opts) {
  const int n = cs.dim;
  const double cutoff = choose_cutoff(cs, opts);
  ZetaOptions zo;
  zo.order = opts.order;
  zo.tolerance = opts.tolerance;
  auto work = [&cs, cutoff, zo](int k) {
    SliceContribution c;
    c.k = k;
    c.alpha = 0.5 * (cs.dim - 1) - k;
    c.betti = cs.betti.at(k);
    c.zeta = evaluate_zeta(coclosed_spectrum(cs, k, cutoff), zo);
    return c;
  };
  std::map<int, SliceContribution> out;
  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    for (int k = 0; k < n; ++k) out.emplace(k, work(k));
    return out;
  }
  // Batches of `threads` slices; results are stored by k, so order is deterministic.
  for (int start = 0; start < n; start += threads) {
    std::vector<std::future<SliceContribution>> fut;
    for (int k = start; k < std::min(n, start + threads); ++k) fut.push_back(std::async(std::launch::async, work, k));
    for (auto& f : fut) {
      SliceContribution c = f.get();
      out.emplace(c.k, std::move(c));
    }
  }
  return out;
}

TorsResult tors_from_slices(const std::map<int, SliceContribution>& slices, int n) {
  TorsResult r;
  for (int k = 0; k < n; ++k) {
    auto it = slices.find(k);
    if (it == slices.end()) throw InvalidArgument("tors: slice k=" + std::to_string(k) + " missing");
    const ZetaEval& z = it->second.zeta;
    r.full_range += 0.5 * sign_pow(k) * z.shifted_prime0_plus;
    r.error += 0.5 * z.err.shifted_prime0;
    if (k < n / 2) {
      if (z.alpha == 0.0) throw DomainError("tors: alpha_k = 0 cannot occur for even n");
      r.half_range += 0.5 * sign_pow(k) * (z.shifted_prime0_plus - z.shifted_prime0_minus);
    }
  }
  r.residual = std::abs(r.full_range - r.half_range);
  return r;
}

TorsResult tors_term(const CrossSection& cs, const TorsOptions& opts) {
  return tors_from_slices(slice_contributions(cs, opts), cs.dim);
}

ResResult res_term(const CrossSection& cs) {
  ResResult r;
  r.residue_double_sum = residue_double_sum(cs);
  r.anomaly_integral = -0.5 * r.residue_double_sum;
  r.res = -0.5 * r.anomaly_integral;
  return r;
}

TorsionReport log_torsion_cone(const CrossSection& cs, const TorsOptions& opts) {
  TorsionReport rep;
  rep.per_slice = slice_contributions(cs, opts);
  const TorsResult t = tors_from_slices(rep.per_slice, cs.dim);
  const ResResult r = res_term(cs);
  rep.top = top_term(cs);
  rep.tors = t.full_range;
  rep.tors_half_range = t.half_range;
  rep.res = r.res;
  rep.anomaly_integral = r.anomaly_integral;
  rep.log_T = rep.top + rep.tors + rep.res;
  rep.error = t.error;
  rep.provenance.library_version = CONETORSION_VERSION;
  rep.provenance.cutoff = choose_cutoff(cs, opts);
  rep.provenance.tolerance = opts.tolerance;
  rep.provenance.order = rep.per_slice.empty() ? 0 : rep.per_slice.begin()->second.zeta.order;
  rep.provenance.threads = std::max(1, opts.threads);
  rep.provenance.split_point = cs.geometry ? cs.geometry->split_point() : 1.0;
  return rep;
}

double betti_log_sum(const std::vector<long>& betti, int n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double e = n - 2.0 * k + 1.0;
    s += 0.5 * sign_pow(k) * static_cast<double>(betti.at(k)) * std::log((1.0 - std::pow(eps, e)) / e);
  }
  return s;
}

double log_torsion_truncated(const CrossSection& cs, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("epsilon must lie in (0,1), got " + std::to_string(eps));
  return betti_log_sum(cs.betti, cs.dim, eps) + 0.5 * std::log(2.0) * static_cast<double>(cs.euler) +
         0.5 * residue_double_sum(cs);
}

TorsionDifference torsion_difference_from(const CrossSection& cs, double eps,
                                          const std::map<int, SliceContribution>& slices) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("epsilon must lie in (0,1), got " + std::to_string(eps));
  const int n = cs.dim;
  TorsionDifference d;
  d.betti_log = betti_log_sum(cs.betti, n, eps);
  for (int k = 0; k < n / 2; ++k) {
    const double b = static_cast<double>(cs.betti.at(k));
    d.product_logs += sign_pow(k) * b * odd_log_sum(n / 2 - k);
    d.product_logs += 0.5 * sign_pow(k) * b * std::log(n - 2.0 * k + 1.0);
    auto it = slices.find(k);
    if (it == slices.end()) throw InvalidArgument("torsion_difference: slice k=" + std::to_string(k) + " missing");
    const ZetaEval& z = it->second.zeta;
    d.zeta_difference += 0.5 * sign_pow(k) * (z.shifted_prime0_minus - z.shifted_prime0_plus);
  }
  d.residue_sum = 0.25 * residue_double_sum(cs);
  d.value = d.betti_log + d.product_logs + d.residue_sum + d.zeta_difference;
  return d;
}

TorsionDifference torsion_difference(const CrossSection& cs, double eps, const TorsOptions& opts) {
  std::map<int, SliceContribution> half;
  const double cutoff = choose_cutoff(cs, opts);
  ZetaOptions zo{opts.order, opts.tolerance};
  for (int k = 0; k < cs.dim / 2; ++k) {
    SliceContribution c;
    c.k = k;
    c.alpha = 0.5 * (cs.dim - 1) - k;
    c.betti = cs.betti.at(k);
    c.zeta = evaluate_zeta(coclosed_spectrum(cs, k, cutoff), zo);
    half.emplace(k, std::move(c));
  }
  return torsion_difference_from(cs, eps, half);
}

ScalingProfile tors_scaling_profile(const CrossSection& cs, const std::vector<double>& mu_values,
                                    const TorsOptions& opts) {
  ScalingProfile prof;
  for (double mu : mu_values) {
    if (!(mu >= 1.0) || !std::isfinite(mu)) throw InvalidArgument("scaling: mu values must be >= 1");
    const CrossSection scaled = rescale_torus(cs, mu);
    TorsOptions o = opts;
    if (o.cutoff > 0.0) o.cutoff *= mu * mu;  // eta scales like mu^2
    ScalingRow row;
    row.mu = mu;
    row.tors = tors_term(scaled, o).full_range;
    row.scaled = mu > 1.0 ? std::abs(row.tors) * mu / std::log(mu) : std::numeric_limits<double>::quiet_NaN();
    if (mu > 1.0) prof.bound_constant = std::max(prof.bound_constant, row.scaled);
    prof.rows.push_back(row);
  }
  return prof;
}

double rs_norm_product_metric(const CrossSection& cs, const TorsOptions& opts) {
  return top_term(cs) + tors_term(cs, opts).full_range;
}

}  // namespace conetorsion
