#include "conetorsion/errors.hpp"
#include "conetorsion/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <string>

namespace conetorsion {

namespace {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

// Orthonormal basis of the kernel of m, as columns.
CMat kernel_basis(const CMat& m, int cols) {
  if (m.rows() == 0) return CMat::Identity(cols, cols);
  Eigen::SelfAdjointEigenSolver<CMat> es(m.adjoint() * m);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<int> idx;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i]) < 1e-9 * scale) idx.push_back(i);
  CMat q(cols, static_cast<int>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) q.col(static_cast<int>(j)) = es.eigenvectors().col(idx[j]);
  return q;
}

void spectrum_on(const CMat& lap, const CMat& q, int rank, std::vector<EigenLevel>& levels, long& zeros) {
  zeros = 0;
  levels.clear();
  if (q.cols() == 0) return;
  CMat restricted = q.adjoint() * lap * q;
  Eigen::SelfAdjointEigenSolver<CMat> es(restricted);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end());
  for (double e : ev) {
    if (std::abs(e) < 1e-8) {
      zeros += rank;
      continue;
    }
    if (!levels.empty() && std::abs(e - levels.back().eta) <= 1e-9 * (1.0 + e)) {
      levels.back().mult += rank;
    } else {
      levels.push_back({e, rank});
    }
  }
}

}  // namespace

BruteForceSpectrum brute_force_form_laplacian(const CrossSection& cs, int k, int shells) {
  if (cs.family != Family::flat_torus) throw Unsupported("brute_force_form_laplacian: flat tori only");
  const int n = cs.dim;
  if (k < 0 || k > n) throw InvalidArgument("brute_force_form_laplacian: degree out of range");
  if (shells < 1 || shells > 6) throw InvalidArgument("brute_force_form_laplacian: shells must be in 1..6");

  // Shell bound: the shells-th distinct nonzero eigenvalue of the scalar Laplacian.
  const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
  double probe = four_pi_sq * std::pow(cs.geometry->shortest_dual_vector(), 2) * (1.0 + 1e-9);
  std::vector<double> distinct;
  while (true) {
    auto norms = cs.geometry->dual_norms(probe);
    std::sort(norms.begin(), norms.end());
    distinct.clear();
    for (double q : norms)
      if (distinct.empty() || q - distinct.back() > level_group_tolerance(q)) distinct.push_back(q);
    if (static_cast<int>(distinct.size()) >= shells) break;
    probe *= 1.5;
  }
  const double bound = distinct[shells - 1] * (1.0 + 1e-10);

  // Lattice points (with zero) up to the bound, as integer vectors.
  const Eigen::MatrixXd& dual = cs.geometry->dual_basis();
  const double radius = std::sqrt(bound / four_pi_sq);
  const Eigen::MatrixXd inv = dual.inverse();
  std::vector<long> box(n);
  for (int i = 0; i < n; ++i) box[i] = static_cast<long>(std::floor(inv.row(i).norm() * radius + 1e-9));
  std::vector<Eigen::VectorXd> wave;  // k-vectors 2 pi B^{-T} m
  std::vector<long> m(n);
  for (int i = 0; i < n; ++i) m[i] = -box[i];
  while (true) {
    Eigen::VectorXd mv(n);
    for (int i = 0; i < n; ++i) mv[i] = static_cast<double>(m[i]);
    Eigen::VectorXd y = dual * mv;
    if (four_pi_sq * y.squaredNorm() <= bound) wave.push_back(2.0 * std::numbers::pi * y);
    int i = 0;
    while (i < n && m[i] == box[i]) {
      m[i] = -box[i];
      ++i;
    }
    if (i == n) break;
    ++m[i];
  }

  const auto forms_k = subsets(n, k);
  const auto forms_km1 = k > 0 ? subsets(n, k - 1) : std::vector<std::vector<int>>{};
  const auto forms_kp1 = k < n ? subsets(n, k + 1) : std::vector<std::vector<int>>{};
  const long npts = static_cast<long>(wave.size());
  const long dim = npts * static_cast<long>(forms_k.size());
  if (dim > kBruteForceMaxDimension)
    throw InvalidArgument("brute_force_form_laplacian: basis size " + std::to_string(dim) + " exceeds " +
                          std::to_string(kBruteForceMaxDimension));

  std::map<std::vector<int>, int> index_km1, index_kp1;
  for (std::size_t i = 0; i < forms_km1.size(); ++i) index_km1[forms_km1[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < forms_kp1.size(); ++i) index_kp1[forms_kp1[i]] = static_cast<int>(i);

  const int nk = static_cast<int>(forms_k.size());
  CMat lap = CMat::Zero(dim, dim);
  CMat div = CMat::Zero(npts * static_cast<long>(forms_km1.size()), dim);
  CMat ext = CMat::Zero(npts * static_cast<long>(forms_kp1.size()), dim);
  const cplx iu(0.0, 1.0);
  for (long p = 0; p < npts; ++p) {
    const Eigen::VectorXd& kv = wave[p];
    for (int f = 0; f < nk; ++f) {
      const long col = p * nk + f;
      lap(col, col) = kv.squaredNorm();
      const auto& idx = forms_k[f];
      // delta(f dx^I) = -i sum_j k_j f iota_{e_j} dx^I
      for (int pos = 0; pos < k; ++pos) {
        std::vector<int> rest = idx;
        rest.erase(rest.begin() + pos);
        const double sign = (pos % 2 == 0) ? 1.0 : -1.0;
        const long row = p * static_cast<long>(forms_km1.size()) + index_km1.at(rest);
        div(row, col) += -iu * kv[idx[pos]] * sign;
      }
      // d(f dx^I) = i sum_j k_j f dx^j ^ dx^I
      for (int j = 0; j < n; ++j) {
        if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
        std::vector<int> merged = idx;
        int before = 0;
        for (int v : idx)
          if (v < j) ++before;
        merged.insert(merged.begin() + before, j);
        const double sign = (before % 2 == 0) ? 1.0 : -1.0;
        const long row = p * static_cast<long>(forms_kp1.size()) + index_kp1.at(merged);
        ext(row, col) += iu * kv[j] * sign;
      }
    }
  }

  BruteForceSpectrum out;
  out.shell_bound = bound;
  out.total_dimension = dim * cs.rank;
  long zeros_coclosed = 0;
  long zeros_closed = 0;
  spectrum_on(lap, kernel_basis(div, static_cast<int>(dim)), cs.rank, out.coclosed, zeros_coclosed);
  spectrum_on(lap, kernel_basis(ext, static_cast<int>(dim)), cs.rank, out.closed, zeros_closed);
  out.harmonic = zeros_coclosed;
  if (zeros_closed != zeros_coclosed)
    throw Error("brute_force_form_laplacian: harmonic count differs between ker d and ker delta");
  return out;
}

}  // namespace conetorsion
