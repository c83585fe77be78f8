#pragma once

#include "conetorsion/spectra.hpp"
#include "conetorsion/zeta.hpp"

#include <map>
#include <string>
#include <vector>

namespace conetorsion {

enum class ModelKind { psi_full, phi_full, psi_truncated, phi_truncated, harmonic_H0 };

struct ModelOperatorSpec {
  ModelKind kind = ModelKind::psi_truncated;
  double nu = 1.0;     // Bessel order; ignored for harmonic_H0 (order |alpha|)
  double alpha = 0.5;
  double eps = 0.25;   // truncation, for truncated and harmonic kinds
};

// det(L + nu^2 z^2) / det(L) from the Bessel closed forms.
double model_det_ratio(const ModelOperatorSpec& spec, double z);
// Same ratio from boundary values of the normalized ODE solution.
double gy_det_ratio_oracle(const ModelOperatorSpec& spec, double z);

// det_zeta of H_0 on [eps, 1] with Dirichlet ends: (sqrt(eps)/|a|)(eps^{-|a|} - eps^{|a|}).
double harmonic_det(double alpha, double eps);
double harmonic_det_oracle(double alpha, double eps);

struct TEta {
  double t = 0.0;
  double p = 0.0;
};

// n is the subtraction order (dimension of N).
TEta t_eta_lambda(double nu, double alpha, double eps, double lambda, int n);
// Limit of p as lambda -> -infinity.
double ab_constant(double nu, double alpha, int n);
// sum_{r=1}^{order} (-nu)^{-r} (M_r(t_eps,-alpha) - M_r(t_eps,alpha) + (alpha^r - (-alpha)^r)/r)
double t_large_nu_series(double nu, double alpha, double eps, double lambda, int order);

struct TorsOptions {
  double cutoff = 0.0;      // 0 means choose from tolerance
  double tolerance = 1e-10;
  int order = 0;            // subtraction order, 0 means n
  int threads = 1;
};

struct SliceContribution {
  int k = 0;
  double alpha = 0.0;
  long betti = 0;
  ZetaEval zeta;
};

struct TorsResult {
  double full_range = 0.0;
  double half_range = 0.0;
  double residual = 0.0;  // |full - half|
  double error = 0.0;
};

struct ResResult {
  double res = 0.0;
  double anomaly_integral = 0.0;
  double residue_double_sum = 0.0;  // S: sum_k (-1)^k sum_r Res sum_b dz psi(b+r)
};

struct Provenance {
  std::string library_version;
  double cutoff = 0.0;
  double tolerance = 0.0;
  int order = 0;
  int threads = 1;
  double split_point = 1.0;
  double wall_time_s = -1.0;  // negative when not recorded
};

struct TorsionReport {
  double top = 0.0;
  double tors = 0.0;
  double tors_half_range = 0.0;
  double res = 0.0;
  double anomaly_integral = 0.0;
  double log_T = 0.0;
  double error = 0.0;
  std::map<int, SliceContribution> per_slice;
  Provenance provenance;
};

double top_term(const CrossSection& cs);
// Zeta data for every slice k = 0..n-1, computed in parallel.
std::map<int, SliceContribution> slice_contributions(const CrossSection& cs, const TorsOptions& opts);
TorsResult tors_term(const CrossSection& cs, const TorsOptions& opts = {});
TorsResult tors_from_slices(const std::map<int, SliceContribution>& slices, int n);
ResResult res_term(const CrossSection& cs);
TorsionReport log_torsion_cone(const CrossSection& cs, const TorsOptions& opts = {});

// Betti-log part: sum_{k=0}^n ((-1)^k/2) b_k log((1 - eps^{n-2k+1}) / (n-2k+1)).
double betti_log_sum(const std::vector<long>& betti, int n, double eps);
double log_torsion_truncated(const CrossSection& cs, double eps);

struct TorsionDifference {
  double value = 0.0;
  double betti_log = 0.0;
  double product_logs = 0.0;
  double residue_sum = 0.0;  // the epsilon-free residue double sum (S/4)
  double zeta_difference = 0.0;
};

TorsionDifference torsion_difference(const CrossSection& cs, double eps, const TorsOptions& opts = {});
TorsionDifference torsion_difference_from(const CrossSection& cs, double eps,
                                          const std::map<int, SliceContribution>& slices);

struct ScalingRow {
  double mu = 1.0;
  double tors = 0.0;
  double scaled = 0.0;  // |Tors| mu / log mu (NaN at mu = 1)
};

struct ScalingProfile {
  std::vector<ScalingRow> rows;
  double bound_constant = 0.0;  // max of the scaled column
};

ScalingProfile tors_scaling_profile(const CrossSection& cs, const std::vector<double>& mu_values,
                                    const TorsOptions& opts = {});

double rs_norm_product_metric(const CrossSection& cs, const TorsOptions& opts = {});

double choose_cutoff(const CrossSection& cs, const TorsOptions& opts);

}  // namespace conetorsion
