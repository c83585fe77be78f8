#include "conetorsion/bessel.hpp"
#include "conetorsion/config.hpp"
#include "conetorsion/errors.hpp"
#include "conetorsion/olverpoly.hpp"
#include "conetorsion/report.hpp"
#include "conetorsion/spectra.hpp"
#include "conetorsion/torsion.hpp"
#include "conetorsion/zeta.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace conetorsion;

namespace {

ModelKind kind_from(const std::string& s) {
  if (s == "psi_full") return ModelKind::psi_full;
  if (s == "phi_full") return ModelKind::phi_full;
  if (s == "psi_truncated") return ModelKind::psi_truncated;
  if (s == "phi_truncated") return ModelKind::phi_truncated;
  if (s == "harmonic_H0") return ModelKind::harmonic_H0;
  throw InvalidArgument("unknown model kind '" + s + "'");
}

TorsOptions options(double cutoff, double tolerance, int order, int threads) {
  TorsOptions o;
  o.cutoff = cutoff;
  o.tolerance = tolerance;
  o.order = order;
  o.threads = threads;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Analytic torsion of bounded generalized cones";
  m.attr("__version__") = CONETORSION_VERSION;

  auto base = py::register_exception<Error>(m, "ConeTorsionError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", base.ptr());
  py::register_exception<PoleError>(m, "PoleError", base.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", base.ptr());
  py::register_exception<CutoffInsufficient>(m, "CutoffInsufficient", base.ptr());
  py::register_exception<StiffnessError>(m, "StiffnessError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<CrossSection>(m, "CrossSection")
      .def_readonly("dim", &CrossSection::dim)
      .def_readonly("rank", &CrossSection::rank)
      .def_readonly("volume", &CrossSection::volume)
      .def_readonly("betti", &CrossSection::betti)
      .def_readonly("euler", &CrossSection::euler)
      .def_readonly("basis", &CrossSection::basis)
      .def("__repr__", [](const CrossSection& c) {
        return "<CrossSection dim=" + std::to_string(c.dim) + " rank=" + std::to_string(c.rank) + ">";
      });

  m.def("flat_torus", &make_flat_torus, py::arg("basis"), py::arg("rank") = 1,
        "Flat torus R^n / B Z^n; columns of basis are the lattice generators.");
  m.def("rescale_torus", &rescale_torus, py::arg("cs"), py::arg("mu"));
  m.def("load_config", [](const std::string& path) { return load_config(path).cross_section; });
  m.def("parse_cross_section", [](const std::string& text) {
    return parse_cross_section(nlohmann::json::parse(text));
  });

  py::class_<TorsResult>(m, "TorsResult")
      .def_readonly("full_range", &TorsResult::full_range)
      .def_readonly("half_range", &TorsResult::half_range)
      .def_readonly("residual", &TorsResult::residual)
      .def_readonly("error", &TorsResult::error);

  py::class_<ResResult>(m, "ResResult")
      .def_readonly("res", &ResResult::res)
      .def_readonly("anomaly_integral", &ResResult::anomaly_integral)
      .def_readonly("residue_double_sum", &ResResult::residue_double_sum);

  py::class_<TorsionDifference>(m, "TorsionDifference")
      .def_readonly("value", &TorsionDifference::value)
      .def_readonly("betti_log", &TorsionDifference::betti_log)
      .def_readonly("product_logs", &TorsionDifference::product_logs)
      .def_readonly("residue_sum", &TorsionDifference::residue_sum)
      .def_readonly("zeta_difference", &TorsionDifference::zeta_difference);

  m.def("top_term", &top_term, py::arg("cs"));
  m.def(
      "tors_term",
      [](const CrossSection& cs, double cutoff, double tolerance, int order, int threads) {
        return tors_term(cs, options(cutoff, tolerance, order, threads));
      },
      py::arg("cs"), py::arg("cutoff") = 0.0, py::arg("tolerance") = 1e-10, py::arg("order") = 0,
      py::arg("threads") = 1);
  m.def("res_term", &res_term, py::arg("cs"));
  m.def(
      "log_torsion_cone",
      [](const CrossSection& cs, double cutoff, double tolerance, int order, int threads) {
        return dump_json(torsion_report_json(log_torsion_cone(cs, options(cutoff, tolerance, order, threads)), cs));
      },
      py::arg("cs"), py::arg("cutoff") = 0.0, py::arg("tolerance") = 1e-10, py::arg("order") = 0,
      py::arg("threads") = 1, "Torsion report as a JSON string.");
  m.def("log_torsion_truncated", &log_torsion_truncated, py::arg("cs"), py::arg("eps"));
  m.def(
      "torsion_difference",
      [](const CrossSection& cs, double eps, double tolerance) {
        return torsion_difference(cs, eps, options(0.0, tolerance, 0, 1));
      },
      py::arg("cs"), py::arg("eps"), py::arg("tolerance") = 1e-10);
  m.def(
      "tors_scaling_profile",
      [](const CrossSection& cs, const std::vector<double>& mu) {
        std::vector<std::tuple<double, double, double>> rows;
        for (const ScalingRow& r : tors_scaling_profile(cs, mu).rows) rows.emplace_back(r.mu, r.tors, r.scaled);
        return rows;
      },
      py::arg("cs"), py::arg("mu"), "Rows (mu, Tors, |Tors| mu / log mu).");

  m.def(
      "shifted_zeta",
      [](const CrossSection& cs, int k, double tolerance) {
        const SpectralSlice s = coclosed_spectrum(cs, k, default_cutoff(cs, tolerance));
        ZetaOptions zo;
        zo.tolerance = tolerance;
        const ZetaEval z = evaluate_zeta(s, zo);
        return py::dict(py::arg("zeta0_plus") = z.shifted0_plus, py::arg("zeta0_minus") = z.shifted0_minus,
                        py::arg("prime0_plus") = z.shifted_prime0_plus,
                        py::arg("prime0_minus") = z.shifted_prime0_minus, py::arg("zeta0") = z.zeta0,
                        py::arg("zeta_prime0") = z.zeta_prime0);
      },
      py::arg("cs"), py::arg("k"), py::arg("tolerance") = 1e-10);
  m.def(
      "coclosed_levels",
      [](const CrossSection& cs, int k, double cutoff) {
        std::vector<std::pair<double, long>> out;
        for (const EigenLevel& l : coclosed_spectrum(cs, k, cutoff).levels) out.emplace_back(l.eta, l.mult);
        return out;
      },
      py::arg("cs"), py::arg("k"), py::arg("cutoff"));

  m.def(
      "model_det_ratio",
      [](const std::string& kind, double nu, double alpha, double eps, double z) {
        return model_det_ratio({kind_from(kind), nu, alpha, eps}, z);
      },
      py::arg("kind"), py::arg("nu"), py::arg("alpha"), py::arg("eps"), py::arg("z"));
  m.def("harmonic_det", &harmonic_det, py::arg("alpha"), py::arg("eps"));
  m.def(
      "t_eta_lambda",
      [](double nu, double alpha, double eps, double lambda, int n) {
        const TEta t = t_eta_lambda(nu, alpha, eps, lambda, n);
        return std::make_pair(t.t, t.p);
      },
      py::arg("nu"), py::arg("alpha"), py::arg("eps"), py::arg("lam"), py::arg("n"));
  m.def("ab_constant", &ab_constant, py::arg("nu"), py::arg("alpha"), py::arg("n"));

  m.def(
      "modified_bessel",
      [](double nu, double x, bool scaled) {
        const BesselQuad q = modified_bessel(nu, x, scaled);
        return std::make_tuple(q.i_val, q.i_prime, q.k_val, q.k_prime);
      },
      py::arg("nu"), py::arg("x"), py::arg("scaled") = false, "(I, I', K, K')");
  m.def("olver_u", [](int r) { return olver_u(r).to_string(); }, py::arg("r"));
  m.def("olver_v", [](int r) { return olver_v(r).to_string(); }, py::arg("r"));
}
