#include "conetorsion/report.hpp"

#include "conetorsion/olverpoly.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace conetorsion {

using nlohmann::json;

namespace {

void write_string(std::ostringstream& out, const std::string& s) { out << json(s).dump(); }

void write(std::ostringstream& out, const json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << "," << nl;
        first = false;
        out << pad;
        write_string(out, it.key());
        out << (indent > 0 ? ": " : ":");
        write(out, it.value(), indent, level + 1);
      }
      out << nl << close_pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << "[" << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << "," << nl;
        out << pad;
        write(out, j[i], indent, level + 1);
      }
      out << nl << close_pad << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    default:
      out << j.dump();
  }
}

void flatten(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ",";
    if (j.is_number_float()) {
      const double v = j.get<double>();
      out << (std::isfinite(v) ? format_double(v) : "nan");
    } else if (j.is_string()) {
      out << j.get<std::string>();
    } else {
      out << j.dump();
    }
    out << "\n";
  }
}

json int_map(const std::map<int, double>& m) {
  json o = json::object();
  for (const auto& [k, v] : m) o[std::to_string(k)] = v;
  return o;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep a marker that the value is floating point.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string dump_json(const json& doc, int indent) {
  std::ostringstream out;
  write(out, doc, indent, 0);
  out << "\n";
  return out.str();
}

std::string dump_flat_csv(const json& doc) {
  std::ostringstream out;
  out << "key,value\n";
  flatten(doc, "", out);
  return out.str();
}

json cross_section_json(const CrossSection& cs) {
  json j;
  j["family"] = cs.family == Family::flat_torus ? "flat_torus" : "round_sphere";
  j["dim"] = cs.dim;
  j["rank"] = cs.rank;
  j["volume"] = cs.volume;
  j["betti"] = cs.betti;
  j["euler"] = cs.euler;
  j["experimental"] = cs.experimental;
  if (cs.family == Family::flat_torus) {
    json rows = json::array();
    for (int i = 0; i < cs.basis.cols(); ++i) {
      json r = json::array();
      for (int k = 0; k < cs.basis.rows(); ++k) r.push_back(cs.basis(k, i));
      rows.push_back(r);
    }
    j["basis"] = rows;
  } else {
    j["radius"] = cs.radius;
  }
  return j;
}

json zeta_eval_json(const ZetaEval& z) {
  json j;
  j["k"] = z.k;
  j["alpha"] = z.alpha;
  j["cutoff"] = z.cutoff;
  j["order"] = z.order;
  j["residues"] = int_map(z.residues);
  j["zeta0"] = z.zeta0;
  j["zeta_prime0"] = z.zeta_prime0;
  j["pp_values"] = int_map(z.pp_values);
  j["shifted_zeta0"] = {{"plus", z.shifted0_plus}, {"minus", z.shifted0_minus}};
  j["shifted_zeta_prime0"] = {{"plus", z.shifted_prime0_plus}, {"minus", z.shifted_prime0_minus}};
  j["k_series"] = {{"plus", z.k_plus}, {"minus", z.k_minus}};
  j["error"] = {{"zeta_prime0", z.err.zeta_prime0},
                {"pp_values", z.err.pp_values},
                {"k_series", z.err.k_series},
                {"shifted_zeta_prime0", z.err.shifted_prime0}};
  return j;
}

json torsion_report_json(const TorsionReport& rep, const CrossSection& cs) {
  json j;
  j["cross_section"] = cross_section_json(cs);
  j["top"] = rep.top;
  j["tors"] = rep.tors;
  j["tors_half_range"] = rep.tors_half_range;
  j["res"] = rep.res;
  j["anomaly_integral"] = rep.anomaly_integral;
  j["log_T"] = rep.log_T;
  j["error_estimate"] = rep.error;
  json slices = json::object();
  for (const auto& [k, c] : rep.per_slice) {
    json s = zeta_eval_json(c.zeta);
    s["betti"] = c.betti;
    slices[std::to_string(k)] = s;
  }
  j["per_slice"] = slices;
  json prov;
  prov["library_version"] = rep.provenance.library_version;
  prov["cutoff"] = rep.provenance.cutoff;
  prov["tolerance"] = rep.provenance.tolerance;
  prov["order"] = rep.provenance.order;
  prov["threads"] = rep.provenance.threads;
  prov["split_point"] = rep.provenance.split_point;
  if (rep.provenance.wall_time_s >= 0.0) prov["wall_time_s"] = rep.provenance.wall_time_s;
  j["provenance"] = prov;
  return j;
}

json spectrum_json(const SpectralSlice& slice) {
  json j;
  j["k"] = slice.k;
  j["alpha"] = slice.alpha;
  j["cutoff"] = slice.cutoff;
  j["betti"] = slice.betti;
  json lv = json::array();
  for (std::size_t i = 0; i < slice.levels.size(); ++i) {
    lv.push_back({{"eta", slice.levels[i].eta}, {"nu", slice.nu(i)}, {"mult", slice.levels[i].mult}});
  }
  j["levels"] = lv;
  if (slice.heat) {
    j["heat_coeffs"] = slice.heat->coeffs;
    j["weyl"] = slice.heat->weyl;
    j["zero_mode"] = slice.heat->zero_mode;
  }
  return j;
}

json scaling_json(const ScalingProfile& prof) {
  json rows = json::array();
  for (const auto& r : prof.rows) rows.push_back({{"mu", r.mu}, {"tors", r.tors}, {"scaled", r.scaled}});
  return {{"rows", rows}, {"bound_constant", prof.bound_constant}};
}

std::string scaling_csv(const ScalingProfile& prof) {
  std::ostringstream out;
  out << "mu,tors,abs_tors_mu_over_log_mu\n";
  for (const auto& r : prof.rows) {
    out << format_double(r.mu) << "," << format_double(r.tors) << ","
        << (std::isfinite(r.scaled) ? format_double(r.scaled) : "nan") << "\n";
  }
  return out.str();
}

json olver_json(int r) {
  json j;
  j["r"] = r;
  j["u"] = olver_u(r).to_string();
  j["v"] = olver_v(r).to_string();
  if (r >= 1) {
    j["D"] = d_poly(r).to_string();
    j["M"] = m_poly(r).to_string();
    json x = json::array();
    json z = json::array();
    for (int b = 0; b <= r; ++b) {
      x.push_back(rational_string(x_coeff(r, b)));
      z.push_back(z_coeff(r, b).to_string());
    }
    j["x"] = x;
    j["z"] = z;
    j["z_diff_sum"] = z_diff_sum_poly(r).to_string();
  }
  return j;
}

}  // namespace conetorsion
