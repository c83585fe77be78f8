#include "conetorsion/config.hpp"
#include "conetorsion/errors.hpp"
#include "conetorsion/report.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace conetorsion;
using nlohmann::json;

namespace {

std::string field_of(const json& doc) {
  try {
    (void)parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field;
  }
  return "<none>";
}

json minimal() {
  return json::parse(R"({"schema": 1, "cross_section": {"family": "flat_torus", "dim": 2}, "tolerance": 1e-10})");
}

}  // namespace

TEST_CASE("minimal configuration") {
  const RunConfig c = parse_config(minimal());
  CHECK(c.cross_section.dim == 2);
  CHECK(c.cross_section.volume == doctest::Approx(1.0));
  CHECK(c.tolerance.value() == 1e-10);
  CHECK(!c.cutoff.has_value());
  CHECK(c.threads == 1);
  CHECK(c.format == "json");
  CHECK(c.tors_options().tolerance == 1e-10);
}

TEST_CASE("basis rows are lattice generators") {
  json d = minimal();
  d["cross_section"] = json::parse(R"({"family": "flat_torus", "basis": [[2, 0], [1, 3]]})");
  const RunConfig c = parse_config(d);
  CHECK(c.cross_section.volume == doctest::Approx(6.0));
  CHECK(c.cross_section.basis(0, 1) == doctest::Approx(1.0));
  CHECK(c.cross_section.basis(1, 1) == doctest::Approx(3.0));
}

TEST_CASE("side scales the unit torus") {
  json d = minimal();
  d["cross_section"] = json::parse(R"({"side": 3})");
  CHECK(parse_config(d).cross_section.volume == doctest::Approx(9.0));
}

TEST_CASE("errors carry field paths") {
  json d = minimal();
  d["schema"] = 2;
  CHECK(field_of(d) == "schema");

  d = minimal();
  d["bogus"] = 1;
  CHECK(field_of(d) == "bogus");

  d = minimal();
  d["cross_section"]["colour"] = "red";
  CHECK(field_of(d) == "cross_section.colour");

  d = minimal();
  d["cutoff"] = 100;
  CHECK(field_of(d) == "cutoff");

  d = minimal();
  d.erase("tolerance");
  CHECK(field_of(d) == "cutoff");

  d = minimal();
  d["epsilon"] = 1.0;
  CHECK(field_of(d) == "epsilon");

  d = minimal();
  d["cross_section"]["basis"] = json::parse("[[1, 2], [2, 4]]");
  CHECK(field_of(d) == "cross_section.basis");

  d = minimal();
  d["cross_section"]["basis"] = json::parse("[[1, 0], [0]]");
  CHECK(field_of(d).rfind("cross_section.basis", 0) == 0);

  d = minimal();
  d["cross_section"]["dim"] = 3;
  CHECK(field_of(d) == "cross_section.dim");

  d = minimal();
  d["cross_section"]["family"] = "klein_bottle";
  CHECK(field_of(d) == "cross_section.family");

  d = minimal();
  d["cross_section"] = json::parse(R"({"family": "round_sphere", "dim": 2})");
  CHECK(field_of(d) == "cross_section.experimental");

  d = minimal();
  d["threads"] = 0;
  CHECK(field_of(d) == "threads");

  d = minimal();
  d["order"] = 1;
  CHECK(field_of(d) == "order");

  d = minimal();
  d["output"] = json::parse(R"({"format": "xml"})");
  CHECK(field_of(d) == "output.format");

  d = minimal();
  d["mu_grid"] = json::parse("[2, 0.5]");
  CHECK(field_of(d) == "mu_grid[1]");
}

TEST_CASE("mu lists") {
  CHECK(parse_mu_list("2,4,8") == std::vector<double>{2, 4, 8});
  CHECK(parse_mu_list("2..64") == std::vector<double>{2, 4, 8, 16, 32, 64});
  CHECK(parse_mu_list("1.5") == std::vector<double>{1.5});
  CHECK_THROWS_AS(parse_mu_list(""), ConfigError);
  CHECK_THROWS_AS(parse_mu_list("abc"), ConfigError);
  CHECK_THROWS_AS(parse_mu_list("0.5"), ConfigError);
  CHECK_THROWS_AS(parse_mu_list("8..2"), ConfigError);
}

TEST_CASE("json output is deterministic with 17 significant digits") {
  json d;
  d["b"] = 0.1;
  d["a"] = 2.0;
  d["c"] = std::nan("");
  d["n"] = 3;
  const std::string s = dump_json(d, 0);
  CHECK(s.find("\"a\"") < s.find("\"b\""));
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("2.0") != std::string::npos);
  CHECK(s.find("null") != std::string::npos);
  CHECK(json::parse(s)["b"].get<double>() == 0.1);
  CHECK(dump_json(d) == dump_json(json::parse(dump_json(d))));
  CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("report round trip") {
  const RunConfig c = default_config();
  const TorsionReport rep = log_torsion_cone(c.cross_section, c.tors_options());
  const json j = torsion_report_json(rep, c.cross_section);
  const json back = json::parse(dump_json(j));
  CHECK(back == json::parse(dump_json(back)));
  CHECK(dump_flat_csv(j).find(',') != std::string::npos);
}

TEST_CASE("load_config reports missing files") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
