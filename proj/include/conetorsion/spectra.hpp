#pragma once

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <vector>

namespace conetorsion {

enum class Family { flat_torus, round_sphere };

struct EigenLevel {
  double eta = 0.0;
  long mult = 0;
  bool operator==(const EigenLevel& o) const { return eta == o.eta && mult == o.mult; }
};

// User-supplied data for the experimental sphere family: per degree k, the
// nonzero coclosed levels and the coefficients c_j of t^{j - n/2} in Theta_k.
struct SpectrumTable {
  std::vector<std::vector<EigenLevel>> levels;
  std::vector<std::vector<double>> heat_coeffs;
};

// Real lattice geometry of a flat torus R^n / B Z^n.
class TorusGeometry {
 public:
  explicit TorusGeometry(const Eigen::MatrixXd& basis);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::MatrixXd& dual_basis() const { return dual_; }  // B^{-T}
  double volume() const { return volume_; }
  double shortest_vector() const { return d_real_; }
  double shortest_dual_vector() const { return d_dual_; }
  // Diameter of the fundamental cell of the dual lattice.
  double dual_cell_diameter() const { return dual_diam_; }
  // Mellin split point balancing real-space and dual-space decay.
  double split_point() const { return split_; }

  // Squared norms |B^{-T} m|^2 (times 4 pi^2) of nonzero m up to eta <= cutoff, unsorted.
  std::vector<double> dual_norms(double cutoff) const;
  // Squared norms |B m|^2 of nonzero m with |Bm| <= radius, unsorted.
  std::vector<double> real_norms(double radius) const;

  // sum_{l != 0} exp(-|l|^2 / (4t)) for 0 < t <= split_point().
  double real_space_sum(double t) const;
  // Distinct |l|^2 of the real lattice within the split-point range, with counts.
  const std::vector<double>& shell_norms_sq() const { return shell_norm_sq_; }
  const std::vector<long>& shell_counts() const { return shell_count_; }

 private:
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd dual_;
  double volume_ = 0.0;
  double d_real_ = 0.0;
  double d_dual_ = 0.0;
  double dual_diam_ = 0.0;
  double split_ = 1.0;
  std::vector<double> shell_norm_sq_;
  std::vector<long> shell_count_;
};

struct CrossSection {
  Family family = Family::flat_torus;
  int dim = 2;
  Eigen::MatrixXd basis;
  double radius = 1.0;
  int rank = 1;
  double volume = 0.0;
  std::vector<long> betti;
  long euler = 0;
  bool experimental = false;
  std::shared_ptr<const TorusGeometry> geometry;
  std::shared_ptr<const SpectrumTable> table;
};

CrossSection make_flat_torus(const Eigen::MatrixXd& basis, int rank = 1);
CrossSection make_round_sphere(int dim, double radius, int rank, std::shared_ptr<const SpectrumTable> table);
// Same torus with the metric scaled by mu^{-2}.
CrossSection rescale_torus(const CrossSection& cs, double mu);

struct BettiNumbers {
  std::vector<long> b;
  long euler = 0;
};

BettiNumbers betti_numbers(const CrossSection& cs);

// Theta_k(t) = a e^{-alpha^2 t} (Vol (4 pi t)^{-n/2} - 1) + R(t)
struct HeatExpansion {
  int dim = 2;
  double alpha_sq = 0.0;
  double weyl = 0.0;       // a Vol / (4 pi)^{n/2}
  double zero_mode = 0.0;  // a
  std::vector<double> coeffs;  // c_j of t^{j - n/2}, j = 0..n
  bool closed_form = true;     // false when coeffs come from a table

  double coefficient(int j) const;
  double main_part(double t) const;
};

// Lattice-point counting bounds used for level counts and series tails.
struct TailModel {
  int dim = 2;
  double multiplicity = 1.0;
  double volume = 1.0;
  double cell_diameter = 0.0;

  double weyl_count(double cutoff) const;
  double count_upper(double cutoff) const;
  double count_lower(double cutoff) const;
  double count_bound(double cutoff) const;
};

struct SpectralSlice {
  int k = 0;
  int dim = 2;
  int rank = 1;
  double alpha = 0.0;
  double cutoff = 0.0;
  long betti = 0;
  long point_multiplicity = 0;
  std::vector<EigenLevel> levels;
  std::optional<HeatExpansion> heat;
  TailModel tail;
  std::shared_ptr<const TorusGeometry> geometry;

  double nu(std::size_t i) const;
  // Exact remainder Theta_k(t) - main_part(t), for t up to the split point.
  double heat_remainder(double t) const;
  double split_point() const;
  long level_count() const;
};

double level_group_tolerance(double eta);
double default_cutoff(const CrossSection& cs, double tolerance);

SpectralSlice coclosed_spectrum(const CrossSection& cs, int k, double cutoff);
HeatExpansion theta_heat_coeffs(const CrossSection& cs, int k);

// Direct truncated sum of Theta_k(t) over the slice.
double theta_direct(const SpectralSlice& slice, double t);

struct BruteForceSpectrum {
  std::vector<EigenLevel> coclosed;  // nonzero, restricted to ker(delta)
  std::vector<EigenLevel> closed;    // nonzero, restricted to ker(d)
  long harmonic = 0;
  long total_dimension = 0;
  double shell_bound = 0.0;  // largest eta included
};

constexpr long kBruteForceMaxDimension = 6000;

BruteForceSpectrum brute_force_form_laplacian(const CrossSection& cs, int k, int shells);

}  // namespace conetorsion
