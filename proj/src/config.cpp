#include "conetorsion/config.hpp"

#include "conetorsion/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace conetorsion {

using nlohmann::json;

namespace {

double number_at(const json& node, const std::string& path) {
  if (!node.is_number()) throw ConfigError(path, "expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

int int_at(const json& node, const std::string& path) {
  if (!node.is_number_integer()) throw ConfigError(path, "expected an integer");
  return node.get<int>();
}

double positive_at(const json& node, const std::string& path) {
  const double v = number_at(node, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be > 0");
  return v;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
    }
  }
}

Eigen::MatrixXd parse_basis(const json& node, int dim, const std::string& path) {
  if (!node.is_array() || static_cast<int>(node.size()) != dim) {
    throw ConfigError(path, "expected " + std::to_string(dim) + " rows");
  }
  Eigen::MatrixXd b(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const std::string row = path + "[" + std::to_string(i) + "]";
    const json& r = node[i];
    if (!r.is_array() || static_cast<int>(r.size()) != dim) {
      throw ConfigError(row, "expected " + std::to_string(dim) + " entries");
    }
    // Rows of the config are lattice generators; the library stores them as columns.
    for (int j = 0; j < dim; ++j) b(j, i) = number_at(r[j], row + "[" + std::to_string(j) + "]");
  }
  return b;
}

std::shared_ptr<const SpectrumTable> parse_table(const json& node, int dim, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(node, {"levels", "heat_coeffs"}, path);
  auto table = std::make_shared<SpectrumTable>();
  if (!node.contains("levels") || !node["levels"].is_array()) throw ConfigError(path + ".levels", "required array");
  if (!node.contains("heat_coeffs") || !node["heat_coeffs"].is_array()) {
    throw ConfigError(path + ".heat_coeffs", "required array");
  }
  const json& lv = node["levels"];
  const json& hc = node["heat_coeffs"];
  if (static_cast<int>(lv.size()) != dim) throw ConfigError(path + ".levels", "need one list per degree 0..n-1");
  if (static_cast<int>(hc.size()) != dim) throw ConfigError(path + ".heat_coeffs", "need one list per degree 0..n-1");
  for (int k = 0; k < dim; ++k) {
    const std::string lp = path + ".levels[" + std::to_string(k) + "]";
    std::vector<EigenLevel> levels;
    for (std::size_t i = 0; i < lv[k].size(); ++i) {
      const std::string ip = lp + "[" + std::to_string(i) + "]";
      const json& e = lv[k][i];
      if (!e.is_object() || !e.contains("eta") || !e.contains("mult")) throw ConfigError(ip, "need eta and mult");
      const double eta = positive_at(e["eta"], ip + ".eta");
      const int mult = int_at(e["mult"], ip + ".mult");
      if (mult <= 0) throw ConfigError(ip + ".mult", "must be positive");
      levels.push_back({eta, mult});
    }
    table->levels.push_back(std::move(levels));
    const std::string hp = path + ".heat_coeffs[" + std::to_string(k) + "]";
    std::vector<double> coeffs;
    for (std::size_t j = 0; j < hc[k].size(); ++j) coeffs.push_back(number_at(hc[k][j], hp + "[" + std::to_string(j) + "]"));
    if (static_cast<int>(coeffs.size()) != dim + 1) throw ConfigError(hp, "need n+1 coefficients");
    table->heat_coeffs.push_back(std::move(coeffs));
  }
  return table;
}

}  // namespace

TorsOptions RunConfig::tors_options() const {
  TorsOptions o;
  o.cutoff = cutoff.value_or(0.0);
  o.tolerance = tolerance.value_or(1e-10);
  o.order = order;
  o.threads = threads;
  return o;
}

RunConfig default_config() {
  RunConfig c;
  c.cross_section = make_flat_torus(Eigen::MatrixXd::Identity(2, 2), 1);
  c.tolerance = 1e-10;
  return c;
}

CrossSection parse_cross_section(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(node, {"family", "dim", "basis", "side", "rank", "radius", "experimental", "table"}, path);
  const std::string family = node.value("family", std::string("flat_torus"));
  int dim = 2;
  if (node.contains("dim")) {
    dim = int_at(node["dim"], path + ".dim");
  } else if (node.contains("basis") && node["basis"].is_array()) {
    dim = static_cast<int>(node["basis"].size());
  }
  const int rank = node.contains("rank") ? int_at(node["rank"], path + ".rank") : 1;
  if (rank < 1) throw ConfigError(path + ".rank", "must be >= 1");
  if (dim < 2 || dim % 2 != 0) throw ConfigError(path + ".dim", "must be even and >= 2");

  if (family == "flat_torus") {
    if (node.contains("basis") && node.contains("side")) throw ConfigError(path, "give basis or side, not both");
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(dim, dim);
    if (node.contains("basis")) basis = parse_basis(node["basis"], dim, path + ".basis");
    if (node.contains("side")) basis *= positive_at(node["side"], path + ".side");
    try {
      return make_flat_torus(basis, rank);
    } catch (const InvalidArgument& e) {
      throw ConfigError(path + ".basis", e.what());
    }
  }
  if (family == "round_sphere") {
    if (!node.value("experimental", false)) {
      throw ConfigError(path + ".experimental", "round_sphere is experimental; set \"experimental\": true");
    }
    const double radius = node.contains("radius") ? positive_at(node["radius"], path + ".radius") : 1.0;
    std::shared_ptr<const SpectrumTable> table;
    if (node.contains("table")) table = parse_table(node["table"], dim, path + ".table");
    return make_round_sphere(dim, radius, rank, table);
  }
  throw ConfigError(path + ".family", "unknown family '" + family + "'");
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "expected a JSON object");
  reject_unknown(doc, {"schema", "cross_section", "cutoff", "tolerance", "epsilon", "mu_grid", "output", "threads", "order"},
                 "");
  if (!doc.contains("schema")) throw ConfigError("schema", "required");
  if (int_at(doc["schema"], "schema") != kConfigSchema) {
    throw ConfigError("schema", "unsupported version, expected " + std::to_string(kConfigSchema));
  }
  RunConfig c;
  if (!doc.contains("cross_section")) throw ConfigError("cross_section", "required");
  c.cross_section = parse_cross_section(doc["cross_section"]);

  const bool has_cut = doc.contains("cutoff");
  const bool has_tol = doc.contains("tolerance");
  if (has_cut == has_tol) throw ConfigError("cutoff", "give exactly one of cutoff or tolerance");
  if (has_cut) c.cutoff = positive_at(doc["cutoff"], "cutoff");
  if (has_tol) c.tolerance = positive_at(doc["tolerance"], "tolerance");

  if (doc.contains("epsilon")) {
    const double e = number_at(doc["epsilon"], "epsilon");
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("epsilon", "must lie in (0,1)");
    c.epsilon = e;
  }
  if (doc.contains("mu_grid")) {
    const json& g = doc["mu_grid"];
    if (!g.is_array()) throw ConfigError("mu_grid", "expected an array");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string p = "mu_grid[" + std::to_string(i) + "]";
      const double mu = number_at(g[i], p);
      if (!(mu >= 1.0)) throw ConfigError(p, "must be >= 1");
      c.mu_grid.push_back(mu);
    }
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (!o.is_object()) throw ConfigError("output", "expected an object");
    reject_unknown(o, {"path", "format"}, "output");
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output.path", "expected a string");
      c.output_path = o["path"].get<std::string>();
    }
    if (o.contains("format")) {
      if (!o["format"].is_string()) throw ConfigError("output.format", "expected a string");
      c.format = o["format"].get<std::string>();
      if (c.format != "json" && c.format != "csv") throw ConfigError("output.format", "must be json or csv");
    }
  }
  if (doc.contains("threads")) {
    c.threads = int_at(doc["threads"], "threads");
    if (c.threads < 1) throw ConfigError("threads", "must be >= 1");
  }
  if (doc.contains("order")) {
    c.order = int_at(doc["order"], "order");
    if (c.order != 0 && c.order < c.cross_section.dim) throw ConfigError("order", "must be 0 or >= dim");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("JSON parse error: ") + e.what());
  }
  return parse_config(doc);
}

std::vector<double> parse_mu_list(const std::string& text) {
  std::vector<double> out;
  auto to_num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("--mu", "cannot parse '" + s + "'");
    }
    if (used != s.size() || !(v >= 1.0)) throw ConfigError("--mu", "values must be numbers >= 1, got '" + s + "'");
    return v;
  };
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const double a = to_num(text.substr(0, dots));
    const double b = to_num(text.substr(dots + 2));
    if (!(a > 1.0) || b < a) throw ConfigError("--mu", "range a..b needs 1 < a <= b");
    for (double mu = a; mu <= b * (1.0 + 1e-12); mu *= 2.0) out.push_back(mu);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(to_num(item));
  }
  if (out.empty()) throw ConfigError("--mu", "empty list");
  return out;
}

}  // namespace conetorsion
