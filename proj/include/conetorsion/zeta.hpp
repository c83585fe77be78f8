#pragma once

#include "conetorsion/spectra.hpp"

#include <map>
#include <vector>

namespace conetorsion {

enum class PoleMode { reject, finite_part };

struct ZetaValue {
  double value = 0.0;  // plain value, or the constant term at a pole
  double error = 0.0;
  bool pole = false;
  double residue = 0.0;  // residue in the s variable when pole is set
};

// zeta_{k,N}(s) = sum m(eta) nu(eta)^{-s}, continued through the Mellin split.
ZetaValue zeta_mellin(const SpectralSlice& slice, double s, PoleMode mode = PoleMode::reject);

// r -> Res_{s=2r} zeta_{k,N}(s), r = 1..n/2.
std::map<int, double> zeta_residues(const SpectralSlice& slice);
// Residue at an integer point s (zero at odd s and outside the pole set).
double zeta_residue_at(const SpectralSlice& slice, int s);

struct Zeta0 {
  double zeta0 = 0.0;
  double zeta_prime0 = 0.0;
  double error = 0.0;
};

Zeta0 zeta0_and_prime0(const SpectralSlice& slice);

struct KSeries {
  double value = 0.0;
  double error = 0.0;
  double direct = 0.0;  // exact sum over levels up to the cutoff
  double tail = 0.0;    // remainder via sum_r (-+alpha)^r / r * zeta_tail(r)
  int tail_terms = 0;
};

// K(0, sign*alpha) with subtraction order `order` (default n).
KSeries k_series(const SpectralSlice& slice, int sign, int order = 0, double tolerance = 1e-10);

struct ZetaOptions {
  int order = 0;  // 0 means n
  double tolerance = 1e-10;
};

struct ZetaErrors {
  double residues = 0.0;
  double zeta0 = 0.0;
  double zeta_prime0 = 0.0;
  double pp_values = 0.0;
  double shifted0 = 0.0;
  double shifted_prime0 = 0.0;
  double k_series = 0.0;
};

struct ZetaEval {
  int k = 0;
  double alpha = 0.0;
  double cutoff = 0.0;
  int order = 0;
  std::map<int, double> residues;   // r -> Res_{s=2r}
  double zeta0 = 0.0;
  double zeta_prime0 = 0.0;
  std::map<int, double> pp_values;  // r -> PP zeta_{k,N}(r), r = 1..order
  double shifted0_plus = 0.0;       // zeta_{k,N}(0, +alpha)
  double shifted0_minus = 0.0;
  double shifted_prime0_plus = 0.0;
  double shifted_prime0_minus = 0.0;
  double k_plus = 0.0;
  double k_minus = 0.0;
  ZetaErrors err;

  double shifted0(int sign) const { return sign > 0 ? shifted0_plus : shifted0_minus; }
  double shifted_prime0(int sign) const { return sign > 0 ? shifted_prime0_plus : shifted_prime0_minus; }
};

ZetaEval evaluate_zeta(const SpectralSlice& slice, const ZetaOptions& opts = {});

double shifted_zeta0(const SpectralSlice& slice, int sign, const ZetaOptions& opts = {});
double shifted_zeta_prime0(const SpectralSlice& slice, int sign, const ZetaOptions& opts = {});

// Independent route: Mellin split applied to the first-order theta
// sum m e^{-(nu +- alpha) t}, with the lattice sum of the massive Poisson kernel.
struct FirstOrderOracle {
  double zeta0_plus = 0.0;
  double zeta0_minus = 0.0;
  double prime0_plus = 0.0;
  double prime0_minus = 0.0;
  double error = 0.0;
};

FirstOrderOracle first_order_mellin_oracle(const CrossSection& cs, int k, double split = 1.0);

}  // namespace conetorsion
