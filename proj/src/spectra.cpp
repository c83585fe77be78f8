#include "conetorsion/spectra.hpp"

#include "conetorsion/errors.hpp"
#include "conetorsion/special.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

namespace conetorsion {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFourPiSq = 4.0 * kPi * kPi;

// Squared norms of A m over nonzero integer m inside the box |m_i| <= box[i], keeping those <= limit.
std::vector<double> enumerate_norms(const Eigen::MatrixXd& a, const std::vector<long>& box, double limit) {
  const int n = static_cast<int>(a.cols());
  std::vector<double> out;
  std::vector<long> m(n);
  for (int i = 0; i < n; ++i) m[i] = -box[i];
  Eigen::VectorXd mv(n);
  while (true) {
    bool zero = true;
    for (int i = 0; i < n; ++i) {
      mv[i] = static_cast<double>(m[i]);
      if (m[i] != 0) zero = false;
    }
    if (!zero) {
      const double q = (a * mv).squaredNorm();
      if (q <= limit) out.push_back(q);
    }
    int i = 0;
    while (i < n && m[i] == box[i]) {
      m[i] = -box[i];
      ++i;
    }
    if (i == n) break;
    ++m[i];
  }
  return out;
}

// Box half-widths guaranteeing every m with |A m| <= radius is visited:
// m = A^{-1} v, so |m_i| <= |row_i(A^{-1})| * radius.
std::vector<long> box_for(const Eigen::MatrixXd& a, double radius) {
  const Eigen::MatrixXd inv = a.inverse();
  std::vector<long> box(a.cols());
  for (int i = 0; i < a.cols(); ++i) box[i] = static_cast<long>(std::floor(inv.row(i).norm() * radius + 1e-9));
  return box;
}

double shortest(const Eigen::MatrixXd& a) {
  double r = a.col(0).norm();
  for (int i = 1; i < a.cols(); ++i) r = std::min(r, a.col(i).norm());
  auto norms = enumerate_norms(a, box_for(a, r), r * r * (1 + 1e-12));
  return std::sqrt(*std::min_element(norms.begin(), norms.end()));
}

double cell_diameter(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.cols());
  double best = 0.0;
  for (long mask = 0; mask < (1L << n); ++mask) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(a.rows());
    for (int i = 0; i < n; ++i) v += ((mask >> i) & 1 ? 1.0 : -1.0) * a.col(i);
    best = std::max(best, v.norm());
  }
  return best;
}

std::vector<EigenLevel> group_levels(std::vector<double> etas, long mult_per_point) {
  std::sort(etas.begin(), etas.end());
  std::vector<EigenLevel> out;
  for (double e : etas) {
    if (!out.empty() && std::abs(e - out.back().eta) <= level_group_tolerance(out.back().eta)) {
      out.back().mult += mult_per_point;
    } else {
      out.push_back({e, mult_per_point});
    }
  }
  return out;
}

double unit_ball_volume(int n) { return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

}  // namespace

double level_group_tolerance(double eta) { return 1e-12 * (1.0 + eta); }

TorusGeometry::TorusGeometry(const Eigen::MatrixXd& basis) : basis_(basis) {
  if (basis.rows() != basis.cols() || basis.rows() == 0) throw InvalidArgument("lattice_basis: must be square");
  volume_ = std::abs(basis.determinant());
  if (!(volume_ > 1e-14 * std::pow(basis.norm(), basis.rows())) || !std::isfinite(volume_))
    throw InvalidArgument("lattice_basis: singular matrix");
  dual_ = basis.inverse().transpose();
  d_real_ = shortest(basis_);
  d_dual_ = shortest(dual_);
  dual_diam_ = cell_diameter(dual_);
  split_ = std::min(1.0, d_real_ / (4.0 * kPi * d_dual_));
  // exp(-|l|^2 / (4 t)) < e^{-46} for every omitted vector at t <= split.
  const double radius = std::sqrt(4.0 * split_ * 46.0);
  auto norms = real_norms(radius);
  std::sort(norms.begin(), norms.end());
  for (double q : norms) {
    if (!shell_norm_sq_.empty() && std::abs(q - shell_norm_sq_.back()) <= 1e-12 * (1.0 + q)) {
      ++shell_count_.back();
    } else {
      shell_norm_sq_.push_back(q);
      shell_count_.push_back(1);
    }
  }
}

std::vector<double> TorusGeometry::dual_norms(double cutoff) const {
  if (!(cutoff > 0.0)) return {};
  const double radius = std::sqrt(cutoff / kFourPiSq);
  auto q = enumerate_norms(dual_, box_for(dual_, radius), radius * radius * (1.0 + 1e-13));
  std::vector<double> out;
  out.reserve(q.size());
  for (double v : q)
    if (kFourPiSq * v <= cutoff) out.push_back(kFourPiSq * v);
  return out;
}

std::vector<double> TorusGeometry::real_norms(double radius) const {
  return enumerate_norms(basis_, box_for(basis_, radius), radius * radius);
}

double TorusGeometry::real_space_sum(double t) const {
  if (!(t > 0.0) || t > split_ * (1.0 + 1e-12))
    throw InvalidArgument("real_space_sum: t outside (0, split point]");
  double s = 0.0;
  for (std::size_t i = 0; i < shell_norm_sq_.size(); ++i) {
    const double e = shell_norm_sq_[i] / (4.0 * t);
    if (e > 745.0) break;
    s += static_cast<double>(shell_count_[i]) * std::exp(-e);
  }
  return s;
}

CrossSection make_flat_torus(const Eigen::MatrixXd& basis, int rank) {
  if (basis.rows() != basis.cols()) throw InvalidArgument("lattice_basis: must be an n x n matrix");
  const int n = static_cast<int>(basis.rows());
  if (n < 2 || n % 2 != 0) throw InvalidArgument("dim: must be even and >= 2, got " + std::to_string(n));
  if (rank < 1) throw InvalidArgument("bundle_rank: must be >= 1");
  if (!basis.allFinite()) throw InvalidArgument("lattice_basis: non-finite entry");
  CrossSection cs;
  cs.family = Family::flat_torus;
  cs.dim = n;
  cs.basis = basis;
  cs.rank = rank;
  cs.geometry = std::make_shared<TorusGeometry>(basis);
  cs.volume = cs.geometry->volume();
  cs.betti.resize(n + 1);
  cs.euler = 0;
  for (int k = 0; k <= n; ++k) {
    cs.betti[k] = rank * binomial(n, k);
    cs.euler += (k % 2 == 0 ? 1 : -1) * cs.betti[k];
  }
  return cs;
}

CrossSection make_round_sphere(int dim, double radius, int rank, std::shared_ptr<const SpectrumTable> table) {
  if (dim < 2 || dim % 2 != 0) throw InvalidArgument("dim: must be even and >= 2, got " + std::to_string(dim));
  if (!(radius > 0.0)) throw InvalidArgument("radius: must be > 0");
  if (rank < 1) throw InvalidArgument("bundle_rank: must be >= 1");
  if (table) {
    if (static_cast<int>(table->levels.size()) != dim || static_cast<int>(table->heat_coeffs.size()) != dim)
      throw InvalidArgument("spectrum_table: needs one entry per degree 0..n-1");
  }
  CrossSection cs;
  cs.family = Family::round_sphere;
  cs.dim = dim;
  cs.radius = radius;
  cs.rank = rank;
  cs.experimental = true;
  cs.table = std::move(table);
  const double omega = 2.0 * std::pow(kPi, 0.5 * (dim + 1)) / std::tgamma(0.5 * (dim + 1));
  cs.volume = omega * std::pow(radius, dim);
  cs.betti.assign(dim + 1, 0);
  cs.betti[0] = rank;
  cs.betti[dim] = rank;
  cs.euler = 2L * rank;
  return cs;
}

CrossSection rescale_torus(const CrossSection& cs, double mu) {
  if (cs.family != Family::flat_torus) throw Unsupported("rescale_torus: flat tori only");
  if (!(mu > 0.0)) throw InvalidArgument("rescale_torus: mu must be > 0");
  return make_flat_torus(cs.basis / mu, cs.rank);
}

BettiNumbers betti_numbers(const CrossSection& cs) { return {cs.betti, cs.euler}; }

double HeatExpansion::coefficient(int j) const {
  if (j < 0) return 0.0;
  if (!closed_form) return j < static_cast<int>(coeffs.size()) ? coeffs[j] : 0.0;
  const int half = dim / 2;
  double c = weyl * std::pow(-alpha_sq, j) / std::tgamma(j + 1.0);
  const int i = j - half;
  if (i >= 0) c -= zero_mode * std::pow(-alpha_sq, i) / std::tgamma(i + 1.0);
  return c;
}

double HeatExpansion::main_part(double t) const {
  if (closed_form) return std::exp(-alpha_sq * t) * (weyl * std::pow(t, -0.5 * dim) - zero_mode);
  double s = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) s += coeffs[j] * std::pow(t, static_cast<double>(j) - 0.5 * dim);
  return s;
}

double TailModel::weyl_count(double cutoff) const {
  const double r = std::sqrt(std::max(cutoff, 0.0) / kFourPiSq);
  return multiplicity * volume * unit_ball_volume(dim) * std::pow(r, dim);
}

double TailModel::count_upper(double cutoff) const {
  const double r = std::sqrt(std::max(cutoff, 0.0) / kFourPiSq);
  return multiplicity * (volume * unit_ball_volume(dim) * std::pow(r + cell_diameter, dim) - 1.0);
}

double TailModel::count_lower(double cutoff) const {
  const double r = std::sqrt(std::max(cutoff, 0.0) / kFourPiSq);
  const double inner = std::max(0.0, r - cell_diameter);
  return multiplicity * std::max(0.0, volume * unit_ball_volume(dim) * std::pow(inner, dim) - 1.0);
}

double TailModel::count_bound(double cutoff) const {
  const double w = weyl_count(cutoff);
  return std::max(count_upper(cutoff) - w, w - count_lower(cutoff));
}

double SpectralSlice::nu(std::size_t i) const { return std::sqrt(levels.at(i).eta + alpha * alpha); }

double SpectralSlice::split_point() const { return geometry ? geometry->split_point() : 1.0; }

long SpectralSlice::level_count() const {
  long c = 0;
  for (const auto& l : levels) c += l.mult;
  return c;
}

double SpectralSlice::heat_remainder(double t) const {
  if (!geometry || !heat) throw Unsupported("experimental-unsupported: remainder needs torus geometry");
  return heat->weyl * std::pow(t, -0.5 * dim) * std::exp(-alpha * alpha * t) * geometry->real_space_sum(t);
}

double default_cutoff(const CrossSection& cs, double tolerance) {
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance: must be > 0");
  const double split = cs.geometry ? cs.geometry->split_point() : 1.0;
  return (-std::log(tolerance) + 14.0) / split;
}

HeatExpansion theta_heat_coeffs(const CrossSection& cs, int k) {
  const int n = cs.dim;
  if (k < 0 || k > n - 1) throw InvalidArgument("degree k out of range 0..n-1");
  const double alpha = 0.5 * (n - 1) - k;
  HeatExpansion h;
  h.dim = n;
  h.alpha_sq = alpha * alpha;
  if (cs.family == Family::round_sphere) {
    if (!cs.table) throw Unsupported("experimental-unsupported: round_sphere needs a spectrum table");
    h.closed_form = false;
    h.coeffs = cs.table->heat_coeffs.at(k);
    return h;
  }
  const double a = static_cast<double>(cs.rank * binomial(n - 1, k));
  h.weyl = a * cs.volume / std::pow(4.0 * kPi, 0.5 * n);
  h.zero_mode = a;
  h.coeffs.resize(n + 1);
  for (int j = 0; j <= n; ++j) h.coeffs[j] = h.coefficient(j);
  return h;
}

SpectralSlice coclosed_spectrum(const CrossSection& cs, int k, double cutoff) {
  const int n = cs.dim;
  if (k < 0 || k > n - 1) throw InvalidArgument("degree k out of range 0..n-1, got " + std::to_string(k));
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw InvalidArgument("cutoff: must be finite and > 0");
  SpectralSlice s;
  s.k = k;
  s.dim = n;
  s.rank = cs.rank;
  s.alpha = 0.5 * (n - 1) - k;
  s.cutoff = cutoff;
  s.betti = cs.betti.at(k);
  if (cs.family == Family::round_sphere) {
    if (!cs.table) throw Unsupported("experimental-unsupported: round_sphere needs a spectrum table");
    for (const auto& l : cs.table->levels.at(k))
      if (l.eta <= cutoff) s.levels.push_back({l.eta, l.mult * cs.rank});
    std::sort(s.levels.begin(), s.levels.end(), [](auto& x, auto& y) { return x.eta < y.eta; });
    s.heat = theta_heat_coeffs(cs, k);
    return s;
  }
  s.point_multiplicity = cs.rank * binomial(n - 1, k);
  s.geometry = cs.geometry;
  s.levels = group_levels(cs.geometry->dual_norms(cutoff), s.point_multiplicity);
  s.heat = theta_heat_coeffs(cs, k);
  s.tail.dim = n;
  s.tail.multiplicity = static_cast<double>(s.point_multiplicity);
  s.tail.volume = cs.volume;
  s.tail.cell_diameter = cs.geometry->dual_cell_diameter();
  return s;
}

double theta_direct(const SpectralSlice& slice, double t) {
  KahanSum s;
  for (std::size_t i = 0; i < slice.levels.size(); ++i) {
    const double nu = slice.nu(i);
    s.add(static_cast<double>(slice.levels[i].mult) * std::exp(-nu * nu * t));
  }
  return s.value();
}

}  // namespace conetorsion
