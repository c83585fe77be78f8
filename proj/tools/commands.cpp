#include "commands.hpp"

#include "conetorsion/bessel.hpp"
#include "conetorsion/config.hpp"
#include "conetorsion/errors.hpp"
#include "conetorsion/olverpoly.hpp"
#include "conetorsion/report.hpp"
#include "conetorsion/torsion.hpp"
#include "conetorsion/zeta.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

namespace conetorsion::cli {

using nlohmann::json;

namespace {

RunConfig resolve(const CliOptions& o) {
  RunConfig c = o.config_path.empty() ? default_config() : load_config(o.config_path);
  if (o.tolerance && o.cutoff) throw ConfigError("--cutoff", "give exactly one of --cutoff or --tolerance");
  if (o.tolerance) {
    if (!(*o.tolerance > 0.0)) throw ConfigError("--tolerance", "must be > 0");
    c.tolerance = o.tolerance;
    c.cutoff.reset();
  }
  if (o.cutoff) {
    if (!(*o.cutoff > 0.0)) throw ConfigError("--cutoff", "must be > 0");
    c.cutoff = o.cutoff;
    c.tolerance.reset();
  }
  if (o.epsilon) {
    if (!(*o.epsilon > 0.0 && *o.epsilon < 1.0)) throw ConfigError("--epsilon", "must lie in (0,1)");
    c.epsilon = o.epsilon;
  }
  if (!o.mu.empty()) c.mu_grid = parse_mu_list(o.mu);
  if (!o.format.empty()) c.format = o.format;
  if (!o.out_path.empty()) c.output_path = o.out_path;
  if (o.threads > 0) c.threads = o.threads;
  return c;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output_path);
  if (!out) throw ConfigError("output.path", "cannot write '" + c.output_path + "'");
  out << text;
}

void emit_doc(const RunConfig& c, const json& doc) { emit(c, c.format == "csv" ? dump_flat_csv(doc) : dump_json(doc)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<int> degrees(const RunConfig& c, int requested) {
  const int n = c.cross_section.dim;
  if (requested >= n) throw ConfigError("--k", "degree must be < dim");
  if (requested >= 0) return {requested};
  std::vector<int> ks(n);
  for (int k = 0; k < n; ++k) ks[k] = k;
  return ks;
}

// Verification bookkeeping: one line per check, worst offender kept.
struct Check {
  std::string group;
  std::string name;
  double worst = 0.0;
  double tol = 0.0;
  std::string where;
  bool pass() const { return std::isfinite(worst) && worst <= tol; }
};

class Suite {
 public:
  explicit Suite(std::string group) : group_(std::move(group)) {}
  bool wants(const std::string& g) const { return group_ == "all" || group_ == g; }
  void record(Check c) {
    std::cout << (c.pass() ? "PASS " : "FAIL ") << c.group << "/" << c.name << "  worst=" << format_double(c.worst)
              << "  tol=" << format_double(c.tol);
    if (!c.where.empty()) std::cout << "  at " << c.where;
    std::cout << "\n";
    if (!c.pass()) {
      ++failures_;
      if (!worst_ || c.worst / c.tol > worst_->worst / worst_->tol) worst_ = c;
    }
  }
  int finish() const {
    if (failures_ == 0) {
      std::cout << "all checks passed\n";
      return kOk;
    }
    std::cout << failures_ << " check(s) failed; worst offender " << worst_->group << "/" << worst_->name << " ("
              << format_double(worst_->worst) << " > " << format_double(worst_->tol) << ")\n";
    return kVerifyFailed;
  }

 private:
  std::string group_;
  int failures_ = 0;
  std::optional<Check> worst_;
};

void keep_worst(Check& c, double v, const std::string& where) {
  if (std::isnan(c.worst)) return;
  if (std::isnan(v) || v > c.worst) {
    c.worst = v;
    c.where = where;
  }
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string pt(std::initializer_list<std::pair<const char*, double>> kv) {
  std::string s;
  for (const auto& [k, v] : kv) s += std::string(s.empty() ? "" : ",") + k + "=" + format_double(v);
  return s;
}

void verify_olver(Suite& suite) {
  Check dm{"olver", "M_r(1,a) = D_r(1) - (-a)^r/r, r=1..6", 0.0, 0.0, ""};
  Check zrb{"olver", "sum_b z_rb(-a)-z_rb(a) = ((-a)^r-a^r)/r, r=1..6", 0.0, 0.0, ""};
  for (int r = 1; r <= 6; ++r) {
    for (int i = 0; i <= r + 1; ++i) {
      const Rational a(i - 1, 2);
      const Rational lhs = m_poly(r).eval_exact(1, a);
      Rational sgn_pow = 1;
      for (int j = 0; j < r; ++j) sgn_pow *= -a;
      const Rational rhs = d_poly(r).eval_exact(1) - sgn_pow / r;
      if (lhs != rhs) keep_worst(dm, 1.0, "r=" + std::to_string(r));
      Rational pow_a = 1;
      for (int j = 0; j < r; ++j) pow_a *= a;
      if (z_diff_sum_poly(r).eval_exact(0, a) != (sgn_pow - pow_a) / r) keep_worst(zrb, 1.0, "r=" + std::to_string(r));
    }
  }
  suite.record(dm);
  suite.record(zrb);

  // (-3/16 + a/2 - a^2/2) t^2 + (5/8 - a/2) t^4 - 7/16 t^6
  Check m2{"olver", "z_{2,b} table of M_2", 0.0, 0.0, ""};
  const CoeffPolynomial expect0 = CoeffPolynomial::monomial(0, 0, Rational(-3, 16)) +
                                  CoeffPolynomial::monomial(0, 1, Rational(1, 2)) +
                                  CoeffPolynomial::monomial(0, 2, Rational(-1, 2));
  const CoeffPolynomial expect1 =
      CoeffPolynomial::monomial(0, 0, Rational(5, 8)) + CoeffPolynomial::monomial(0, 1, Rational(-1, 2));
  const CoeffPolynomial expect2 = CoeffPolynomial::monomial(0, 0, Rational(-7, 16));
  const CoeffPolynomial* want[] = {&expect0, &expect1, &expect2};
  for (int b = 0; b <= 2; ++b) {
    for (int i = 0; i < 4; ++i) {
      const Rational a(i, 3);
      if (z_coeff(2, b).eval_exact(0, a) != want[b]->eval_exact(0, a)) keep_worst(m2, 1.0, "b=" + std::to_string(b));
    }
  }
  suite.record(m2);
}

void verify_bessel(Suite& suite) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> nu_d(0.0, 50.0), x_d(0.1, 50.0);
  Check w{"bessel", "Wronskian K I' - K' I = 1/x at 100 random points", 0.0, 1e-12, ""};
  for (int i = 0; i < 100; ++i) {
    const double nu = nu_d(rng), x = x_d(rng);
    const BesselQuad q = modified_bessel(nu, x, true);
    keep_worst(w, std::abs(x * (q.k_val * q.i_prime - q.k_prime * q.i_val) - 1.0), pt({{"nu", nu}, {"x", x}}));
  }
  suite.record(w);

  Check u{"bessel", "uniform expansion within truncation bound, nu >= 30", 0.0, 1.0, ""};
  for (double nu : {30.0, 45.0, 80.0, 150.0}) {
    for (double z : {0.2, 1.0, 2.5, 6.0}) {
      const BesselQuad q = modified_bessel(nu, nu * z, true);
      const double si = std::exp(nu * z), sk = std::exp(-nu * z);
      const std::pair<BesselKind, double> kinds[] = {{BesselKind::I, q.i_val * si},
                                                     {BesselKind::IPrime, q.i_prime * si},
                                                     {BesselKind::K, q.k_val * sk},
                                                     {BesselKind::KPrime, q.k_prime * sk}};
      if (nu * z > 700.0) continue;
      for (const auto& [kind, direct] : kinds) {
        for (int terms : {2, 4}) {
          const UniformValue v = uniform_expansion(kind, nu, z, terms);
          // Direct values carry up to 1e-11 relative error at large order.
          const double bound = 10.0 * v.truncation + 1e-11 * std::abs(direct);
          keep_worst(u, std::abs(v.value - direct) / bound, pt({{"nu", nu}, {"z", z}, {"terms", double(terms)}}));
        }
      }
    }
  }
  suite.record(u);
}

void verify_det(Suite& suite) {
  Check grid{"det", "closed forms vs ODE oracle, 5x5x3 grid per truncated kind", 0.0, 1e-6, ""};
  for (ModelKind kind : {ModelKind::psi_truncated, ModelKind::phi_truncated}) {
    for (double nu : {1.0, 1.5, 2.5, 4.0, 7.0}) {
      for (double z : {0.05, 0.3, 1.0, 2.0, 3.0}) {
        for (double eps : {0.1, 0.25, 0.5}) {
          const ModelOperatorSpec s{kind, nu, 0.5, eps};
          keep_worst(grid, rel(model_det_ratio(s, z), gy_det_ratio_oracle(s, z)),
                     pt({{"nu", nu}, {"z", z}, {"eps", eps}}));
        }
      }
    }
  }
  suite.record(grid);

  Check full{"det", "full-cone closed forms vs ODE oracle", 0.0, 1e-6, ""};
  for (ModelKind kind : {ModelKind::psi_full, ModelKind::phi_full}) {
    for (double nu : {1.0, 2.5, 7.0}) {
      for (double z : {0.05, 1.0, 3.0}) {
        const ModelOperatorSpec s{kind, nu, 0.5, 0.25};
        keep_worst(full, rel(model_det_ratio(s, z), gy_det_ratio_oracle(s, z)), pt({{"nu", nu}, {"z", z}}));
      }
    }
  }
  suite.record(full);

  Check h{"det", "harmonic_det vs Dirichlet ODE oracle", 0.0, 1e-6, ""};
  for (double a : {0.5, -1.5, 2.5}) {
    for (double eps : {0.1, 0.25, 0.5}) {
      keep_worst(h, rel(harmonic_det(a, eps), harmonic_det_oracle(a, eps)), pt({{"alpha", a}, {"eps", eps}}));
    }
  }
  suite.record(h);

  Check z0{"det", "ratios -> 1 at z = 1e-6", 0.0, 1e-8, ""};
  for (ModelKind kind : {ModelKind::psi_full, ModelKind::phi_full, ModelKind::psi_truncated, ModelKind::phi_truncated,
                         ModelKind::harmonic_H0}) {
    for (double nu : {1.0, 2.5, 7.0}) {
      const ModelOperatorSpec s{kind, nu, 0.5, 0.25};
      keep_worst(z0, std::abs(model_det_ratio(s, 1e-6) - 1.0), pt({{"kind", double(int(kind))}, {"nu", nu}}));
    }
  }
  suite.record(z0);
}

void verify_zeta(Suite& suite, const RunConfig& c) {
  const CrossSection& cs = c.cross_section;
  const auto slices = slice_contributions(cs, c.tors_options());
  Check oracle{"zeta", "shifted zeta(0,+-a), zeta'(0,+-a) vs first-order Mellin oracle", 0.0, 1e-7, ""};
  for (const auto& [k, sc] : slices) {
    const FirstOrderOracle fo = first_order_mellin_oracle(cs, k);
    const ZetaEval& z = sc.zeta;
    const std::string at = "k=" + std::to_string(k);
    keep_worst(oracle, std::abs(z.shifted0_plus - fo.zeta0_plus), at);
    keep_worst(oracle, std::abs(z.shifted0_minus - fo.zeta0_minus), at);
    keep_worst(oracle, std::abs(z.shifted_prime0_plus - fo.prime0_plus), at);
    keep_worst(oracle, std::abs(z.shifted_prime0_minus - fo.prime0_minus), at);
  }
  suite.record(oracle);

  Check stab{"zeta", "stability under cutoff doubling and order n -> n+2", 0.0, 1e-8, ""};
  TorsOptions doubled = c.tors_options();
  doubled.cutoff = 2.0 * choose_cutoff(cs, doubled);
  TorsOptions higher = c.tors_options();
  higher.order = cs.dim + 2;
  const auto s2 = slice_contributions(cs, doubled);
  const auto s3 = slice_contributions(cs, higher);
  for (const auto& [k, sc] : slices) {
    for (int sign : {+1, -1}) {
      const std::string at = "k=" + std::to_string(k) + (sign > 0 ? ",+" : ",-");
      keep_worst(stab, std::abs(sc.zeta.shifted_prime0(sign) - s2.at(k).zeta.shifted_prime0(sign)), at + ",cutoff");
      keep_worst(stab, std::abs(sc.zeta.shifted_prime0(sign) - s3.at(k).zeta.shifted_prime0(sign)), at + ",order");
    }
  }
  suite.record(stab);
}

void verify_tors(Suite& suite, const RunConfig& c) {
  Check dual{"tors", "full-range and half-range Tors agree", 0.0, 1e-8, ""};
  keep_worst(dual, tors_term(c.cross_section, c.tors_options()).residual, "config torus");
  if (c.cross_section.dim != 4) {
    keep_worst(dual, tors_term(make_flat_torus(Eigen::MatrixXd::Identity(4, 4)), c.tors_options()).residual, "unit T^4");
  }
  suite.record(dual);

  Check diff{"tors", "torsion_difference = truncated - cone", 0.0, 1e-8, ""};
  const TorsionReport rep = log_torsion_cone(c.cross_section, c.tors_options());
  for (double eps : {0.1, 0.25, 0.5}) {
    const double lhs = torsion_difference_from(c.cross_section, eps, rep.per_slice).value;
    keep_worst(diff, std::abs(lhs - (log_torsion_truncated(c.cross_section, eps) - rep.log_T)), pt({{"eps", eps}}));
  }
  suite.record(diff);
}

void verify_spectra(Suite& suite, const RunConfig& c) {
  const CrossSection& cs = c.cross_section;
  Check sp{"spectra", "coclosed_spectrum vs brute-force form Laplacian", 0.0, 1e-9, ""};
  const int shells = cs.dim <= 2 ? 4 : 2;
  for (int k = 0; k < cs.dim; ++k) {
    const BruteForceSpectrum bf = brute_force_form_laplacian(cs, k, shells);
    const SpectralSlice s = coclosed_spectrum(cs, k, bf.shell_bound);
    const std::string at = "k=" + std::to_string(k);
    if (bf.coclosed.size() != s.levels.size()) {
      keep_worst(sp, 1.0, at + " level count");
      continue;
    }
    if (bf.harmonic != cs.betti.at(k)) keep_worst(sp, 1.0, at + " harmonic count");
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
      if (bf.coclosed[i].mult != s.levels[i].mult) keep_worst(sp, 1.0, at + " multiplicity");
      keep_worst(sp, std::abs(bf.coclosed[i].eta - s.levels[i].eta) / (1.0 + s.levels[i].eta), at);
    }
  }
  suite.record(sp);
}

void verify_regularization(Suite& suite) {
  struct Triple {
    double nu, alpha, eps;
    int n;
  };
  const Triple triples[] = {{2.5, 0.5, 0.25, 2}, {3.0, 1.5, 0.25, 4}, {3.5, -0.5, 0.1, 2}};
  Check small{"regularization", "|p(lambda)| at lambda = -1e-8", 0.0, 1e-6, ""};
  Check large{"regularization", "p(lambda) -> AB constant at lambda = -1e6", 0.0, 1e-4, ""};
  for (const auto& t : triples) {
    const std::string at = pt({{"nu", t.nu}, {"alpha", t.alpha}, {"eps", t.eps}});
    keep_worst(small, std::abs(t_eta_lambda(t.nu, t.alpha, t.eps, -1e-8, t.n).p), at);
    keep_worst(large, std::abs(t_eta_lambda(t.nu, t.alpha, t.eps, -1e6, t.n).p - ab_constant(t.nu, t.alpha, t.n)), at);
  }
  suite.record(small);
  suite.record(large);
}

}  // namespace

int run_torsion(const CliOptions& o) {
  const RunConfig c = resolve(o);
  const auto t0 = std::chrono::steady_clock::now();
  TorsionReport rep = log_torsion_cone(c.cross_section, c.tors_options());
  if (o.timing) rep.provenance.wall_time_s = seconds_since(t0);
  emit_doc(c, torsion_report_json(rep, c.cross_section));
  return kOk;
}

int run_truncated(const CliOptions& o) {
  const RunConfig c = resolve(o);
  const double eps = c.epsilon.value_or(0.25);
  const auto t0 = std::chrono::steady_clock::now();
  const TorsionReport rep = log_torsion_cone(c.cross_section, c.tors_options());
  const double truncated = log_torsion_truncated(c.cross_section, eps);
  const TorsionDifference d = torsion_difference_from(c.cross_section, eps, rep.per_slice);
  json doc;
  doc["cross_section"] = cross_section_json(c.cross_section);
  doc["epsilon"] = eps;
  doc["log_T_truncated"] = truncated;
  doc["log_T_cone"] = rep.log_T;
  doc["difference"] = {{"value", d.value},
                       {"betti_log", d.betti_log},
                       {"product_logs", d.product_logs},
                       {"residue_sum", d.residue_sum},
                       {"zeta_difference", d.zeta_difference}};
  doc["consistency_residual"] = std::abs(d.value - (truncated - rep.log_T));
  if (o.timing) doc["wall_time_s"] = seconds_since(t0);
  emit_doc(c, doc);
  return kOk;
}

int run_anomaly(const CliOptions& o) {
  const RunConfig c = resolve(o);
  const CrossSection& cs = c.cross_section;
  const auto t0 = std::chrono::steady_clock::now();
  const ResResult r = res_term(cs);
  json doc;
  doc["cross_section"] = cross_section_json(cs);
  doc["anomaly_integral"] = r.anomaly_integral;
  doc["res"] = r.res;
  if (cs.family == Family::flat_torus && cs.dim == 2) {
    const double closed = -cs.rank * cs.volume / (8.0 * M_PI);
    doc["closed_form"] = closed;
    doc["relative_error"] = rel(r.anomaly_integral, closed);
  }
  if (o.timing) doc["wall_time_s"] = seconds_since(t0);
  emit_doc(c, doc);
  return kOk;
}

int run_scaling(const CliOptions& o) {
  RunConfig c = resolve(o);
  if (o.format.empty() && c.format == "json" && o.config_path.empty()) c.format = "csv";
  if (c.mu_grid.empty()) c.mu_grid = {2, 4, 8, 16, 32, 64};
  const ScalingProfile prof = tors_scaling_profile(c.cross_section, c.mu_grid, c.tors_options());
  if (c.format == "csv") {
    emit(c, scaling_csv(prof));
  } else {
    emit(c, dump_json(scaling_json(prof)));
  }
  return kOk;
}

int run_dump_spectrum(const CliOptions& o) {
  const RunConfig c = resolve(o);
  const double cutoff = choose_cutoff(c.cross_section, c.tors_options());
  json doc;
  doc["cross_section"] = cross_section_json(c.cross_section);
  json slices = json::array();
  for (int k : degrees(c, o.degree)) slices.push_back(spectrum_json(coclosed_spectrum(c.cross_section, k, cutoff)));
  doc["slices"] = slices;
  emit_doc(c, doc);
  return kOk;
}

int run_dump_zeta(const CliOptions& o) {
  const RunConfig c = resolve(o);
  const double cutoff = choose_cutoff(c.cross_section, c.tors_options());
  ZetaOptions zo{c.order, c.tolerance.value_or(1e-10)};
  json doc;
  doc["cross_section"] = cross_section_json(c.cross_section);
  json slices = json::array();
  for (int k : degrees(c, o.degree)) {
    slices.push_back(zeta_eval_json(evaluate_zeta(coclosed_spectrum(c.cross_section, k, cutoff), zo)));
  }
  doc["slices"] = slices;
  emit_doc(c, doc);
  return kOk;
}

int run_dump_olver(const CliOptions& o) {
  const RunConfig c = resolve(o);
  json doc = json::array();
  for (int r = 0; r <= o.olver_order; ++r) doc.push_back(olver_json(r));
  emit_doc(c, doc);
  return kOk;
}

int run_verify(const CliOptions& o) {
  const RunConfig c = resolve(o);
  Suite suite(o.verify_group);
  if (suite.wants("olver")) verify_olver(suite);
  if (suite.wants("bessel")) verify_bessel(suite);
  if (suite.wants("det")) verify_det(suite);
  if (suite.wants("regularization")) verify_regularization(suite);
  if (suite.wants("zeta")) verify_zeta(suite, c);
  if (suite.wants("tors")) verify_tors(suite, c);
  if (suite.wants("spectra")) verify_spectra(suite, c);
  return suite.finish();
}

}  // namespace conetorsion::cli
