#pragma once

#include "conetorsion/spectra.hpp"
#include "conetorsion/torsion.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace conetorsion {

constexpr int kConfigSchema = 1;

struct RunConfig {
  CrossSection cross_section;
  std::optional<double> cutoff;
  std::optional<double> tolerance;
  std::optional<double> epsilon;
  std::vector<double> mu_grid;
  std::string output_path;  // empty means stdout
  std::string format = "json";
  int threads = 1;
  int order = 0;

  TorsOptions tors_options() const;
};

// Unit square T^2, rank 1, tolerance 1e-10.
RunConfig default_config();
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

CrossSection parse_cross_section(const nlohmann::json& node, const std::string& path = "cross_section");

// "2,4,8" or "2..64" (doubling from the first to the last value).
std::vector<double> parse_mu_list(const std::string& text);

}  // namespace conetorsion
