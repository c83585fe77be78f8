#pragma once

#include "conetorsion/spectra.hpp"
#include "conetorsion/torsion.hpp"
#include "conetorsion/zeta.hpp"

#include <json.hpp>

#include <string>

namespace conetorsion {

// Deterministic text: keys sorted, floating values with 17 significant digits,
// non-finite values as null.
std::string dump_json(const nlohmann::json& doc, int indent = 2);
// Flattened "key,value" rows for an object tree; arrays use [i] suffixes.
std::string dump_flat_csv(const nlohmann::json& doc);
std::string format_double(double x);

nlohmann::json cross_section_json(const CrossSection& cs);
nlohmann::json zeta_eval_json(const ZetaEval& z);
nlohmann::json torsion_report_json(const TorsionReport& rep, const CrossSection& cs);
nlohmann::json spectrum_json(const SpectralSlice& slice);
nlohmann::json scaling_json(const ScalingProfile& prof);
std::string scaling_csv(const ScalingProfile& prof);
nlohmann::json olver_json(int r);

}  // namespace conetorsion
