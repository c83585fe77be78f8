#include "conetorsion/errors.hpp"
#include "conetorsion/special.hpp"
#include "conetorsion/spectra.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace conetorsion;

namespace {

CrossSection unit_torus(int n, int rank = 1) { return make_flat_torus(Eigen::MatrixXd::Identity(n, n), rank); }

Eigen::MatrixXd skew2() {
  Eigen::MatrixXd b(2, 2);
  b << 1.0, 0.4, 0.0, 1.3;
  return b;
}

// Independent count: integer vectors m with 4 pi^2 |B^{-T} m|^2 = eta, by direct box enumeration.
std::map<long, long> scalar_levels_unit(int n, int range) {
  std::map<long, long> counts;  // |m|^2 -> number of m
  std::vector<int> m(n, -range);
  while (true) {
    long q = 0;
    for (int v : m) q += static_cast<long>(v) * v;
    if (q > 0) ++counts[q];
    int i = 0;
    while (i < n && ++m[i] > range) m[i++] = -range;
    if (i == n) break;
  }
  return counts;
}

void compare_with_brute_force(const CrossSection& cs, int shells) {
  for (int k = 0; k < cs.dim; ++k) {
    const BruteForceSpectrum bf = brute_force_form_laplacian(cs, k, shells);
    const SpectralSlice s = coclosed_spectrum(cs, k, bf.shell_bound);
    REQUIRE(bf.coclosed.size() == s.levels.size());
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
      CHECK(bf.coclosed[i].mult == s.levels[i].mult);
      CHECK(std::abs(bf.coclosed[i].eta - s.levels[i].eta) <= 1e-9 * (1.0 + s.levels[i].eta));
    }
    CHECK(bf.harmonic == cs.betti[k]);
  }
}

}  // namespace

TEST_CASE("Betti numbers and Euler characteristic") {
  const CrossSection t2 = unit_torus(2);
  CHECK(t2.betti == std::vector<long>{1, 2, 1});
  CHECK(t2.euler == 0);
  const CrossSection t4 = unit_torus(4, 2);
  CHECK(t4.betti == std::vector<long>{2, 8, 12, 8, 2});
  CHECK(t4.euler == 0);
  CHECK(betti_numbers(t4).b == t4.betti);
}

TEST_CASE("unit T^2 coclosed 0-form spectrum: first level 4 pi^2 with multiplicity 4") {
  const SpectralSlice s = coclosed_spectrum(unit_torus(2), 0, 100.0);
  REQUIRE(!s.levels.empty());
  CHECK(s.levels[0].eta == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-14));
  CHECK(s.levels[0].mult == 4);
  CHECK(s.alpha == 0.5);
  CHECK(s.levels[1].eta == doctest::Approx(8 * M_PI * M_PI).epsilon(1e-14));
  CHECK(s.levels[1].mult == 4);
}

TEST_CASE("T^2 degree 1 has the same coclosed levels as degree 0, alpha flipped") {
  const CrossSection cs = unit_torus(2);
  const SpectralSlice s0 = coclosed_spectrum(cs, 0, 500.0);
  const SpectralSlice s1 = coclosed_spectrum(cs, 1, 500.0);
  CHECK(s1.alpha == -0.5);
  CHECK(s0.levels == s1.levels);
}

TEST_CASE("level multiplicities match an independent lattice count on unit T^4") {
  const CrossSection cs = unit_torus(4);
  const auto counts = scalar_levels_unit(4, 3);
  for (int k = 0; k < 4; ++k) {
    const SpectralSlice s = coclosed_spectrum(cs, k, 4 * M_PI * M_PI * 9.0);
    for (const auto& l : s.levels) {
      const long q = std::lround(l.eta / (4 * M_PI * M_PI));
      CHECK(l.mult == counts.at(q) * binomial(3, k));
    }
  }
}

TEST_CASE("brute-force form Laplacian agrees on T^2 (square and skew) and T^4") {
  compare_with_brute_force(unit_torus(2), 5);
  compare_with_brute_force(make_flat_torus(skew2()), 4);
  compare_with_brute_force(unit_torus(4), 2);
}

TEST_CASE("Hodge dimension count: coclosed + closed + harmonic = rank C(n,k) lattice count") {
  const CrossSection cs = unit_torus(2, 2);
  for (int k = 0; k <= 1; ++k) {
    const BruteForceSpectrum bf = brute_force_form_laplacian(cs, k, 3);
    long total = bf.harmonic;
    for (const auto& l : bf.coclosed) total += l.mult;
    for (const auto& l : bf.closed) total += l.mult;
    CHECK(total == bf.total_dimension);
  }
}

TEST_CASE("heat expansion reproduces the direct theta sum") {
  const CrossSection cs = make_flat_torus(skew2());
  const double t_star = cs.geometry->split_point();
  for (int k = 0; k < 2; ++k) {
    const SpectralSlice s = coclosed_spectrum(cs, k, default_cutoff(cs, 1e-14) * 2.0);
    for (double t : {0.3 * t_star, t_star}) {
      const double expansion = s.heat->main_part(t) + s.heat_remainder(t);
      CHECK(expansion == doctest::Approx(theta_direct(s, t)).epsilon(1e-11));
    }
  }
}

TEST_CASE("heat coefficients subtract the per-point multiplicity") {
  const CrossSection cs = unit_torus(4);
  const HeatExpansion h = theta_heat_coeffs(cs, 1);
  CHECK(h.zero_mode == 3.0);
  CHECK(h.weyl == doctest::Approx(3.0 / (16.0 * M_PI * M_PI)).epsilon(1e-15));
}

TEST_CASE("rescaling multiplies eigenvalues by mu^2") {
  const CrossSection cs = unit_torus(2);
  const CrossSection scaled = rescale_torus(cs, 3.0);
  CHECK(scaled.volume == doctest::Approx(1.0 / 9.0));
  const SpectralSlice a = coclosed_spectrum(cs, 0, 200.0);
  const SpectralSlice b = coclosed_spectrum(scaled, 0, 1800.0);
  REQUIRE(a.levels.size() == b.levels.size());
  for (std::size_t i = 0; i < a.levels.size(); ++i) CHECK(b.levels[i].eta == doctest::Approx(9.0 * a.levels[i].eta));
}

TEST_CASE("Weyl counting bounds bracket the true count") {
  const CrossSection cs = make_flat_torus(skew2());
  const SpectralSlice s = coclosed_spectrum(cs, 0, 3000.0);
  for (double lam : {500.0, 1500.0, 3000.0}) {
    double count = 0.0;
    for (const auto& l : s.levels)
      if (l.eta <= lam) count += static_cast<double>(l.mult);
    CHECK(count <= s.tail.count_upper(lam));
    CHECK(count >= s.tail.count_lower(lam));
  }
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(make_flat_torus(Eigen::MatrixXd::Identity(3, 3)), InvalidArgument);
  Eigen::MatrixXd singular(2, 2);
  singular << 1, 2, 2, 4;
  CHECK_THROWS_AS(make_flat_torus(singular), InvalidArgument);
  CHECK_THROWS_AS(make_flat_torus(Eigen::MatrixXd::Identity(2, 2), 0), InvalidArgument);
  CHECK_THROWS_AS(coclosed_spectrum(unit_torus(2), 2, 10.0), InvalidArgument);
  CHECK_THROWS_AS(coclosed_spectrum(unit_torus(2), 0, -1.0), InvalidArgument);
}

TEST_CASE("sphere family is gated behind a user table") {
  const CrossSection sphere = make_round_sphere(2, 1.0, 1, nullptr);
  CHECK(sphere.experimental);
  CHECK_THROWS_AS(coclosed_spectrum(sphere, 0, 10.0), Unsupported);
}
