#include "commands.hpp"

#include "conetorsion/errors.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

namespace cli = conetorsion::cli;

namespace {

void add_common(CLI::App* sub, cli::CliOptions& o) {
  sub->add_option("--config", o.config_path, "JSON run configuration (schema 1)");
  sub->add_option("--out", o.out_path, "Write the report here instead of stdout");
  sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--threads", o.threads, "Worker threads over degrees k")->check(CLI::PositiveNumber);
  sub->add_option("--tolerance", o.tolerance, "Target tolerance; picks the cutoff");
  sub->add_option("--cutoff", o.cutoff, "Eigenvalue cutoff on eta");
  sub->add_flag("--timing", o.timing, "Record wall time in the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic torsion of bounded generalized cones over flat tori"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CONETORSION_VERSION);
  cli::CliOptions o;
  std::function<int(const cli::CliOptions&)> action;

  auto bind = [&](CLI::App* sub, int (*fn)(const cli::CliOptions&)) {
    sub->callback([&action, fn] { action = fn; });
  };

  auto* torsion = app.add_subcommand("torsion", "log T = Top + Tors + Res as a JSON report");
  add_common(torsion, o);
  bind(torsion, cli::run_torsion);

  auto* truncated = app.add_subcommand("truncated", "Truncated-cone torsion and the difference formula");
  add_common(truncated, o);
  truncated->add_option("--epsilon", o.epsilon, "Truncation parameter in (0,1)");
  bind(truncated, cli::run_truncated);

  auto* anomaly = app.add_subcommand("anomaly", "Anomaly integral from zeta residues");
  add_common(anomaly, o);
  bind(anomaly, cli::run_anomaly);

  auto* scaling = app.add_subcommand("scaling", "Tors under the metric scaling g -> mu^-2 g");
  add_common(scaling, o);
  scaling->add_option("--mu", o.mu, "Comma list 2,4,8 or doubling range 2..64");
  bind(scaling, cli::run_scaling);

  auto* spectrum = app.add_subcommand("dump-spectrum", "Coclosed levels and heat coefficients");
  add_common(spectrum, o);
  spectrum->add_option("--k", o.degree, "Form degree (default: all)");
  bind(spectrum, cli::run_dump_spectrum);

  auto* zeta = app.add_subcommand("dump-zeta", "Residues, zeta'(0) and shifted values per degree");
  add_common(zeta, o);
  zeta->add_option("--k", o.degree, "Form degree (default: all)");
  bind(zeta, cli::run_dump_zeta);

  auto* olver = app.add_subcommand("dump-olver", "Olver polynomials and coefficient tables as exact rationals");
  add_common(olver, o);
  olver->add_option("--order", o.olver_order, "Highest r")->check(CLI::Range(1, 12));
  bind(olver, cli::run_dump_olver);

  auto* verify = app.add_subcommand("verify", "Identity and oracle checks; exit 1 on failure");
  add_common(verify, o);
  verify->add_option("group", o.verify_group, "all, olver, bessel, det, zeta, tors, spectra or regularization")
      ->check(CLI::IsMember({"all", "olver", "bessel", "det", "zeta", "tors", "spectra", "regularization"}));
  bind(verify, cli::run_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfigError;
  }
  try {
    return action(o);
  } catch (const conetorsion::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kConfigError;
  } catch (const conetorsion::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return cli::kConfigError;
  } catch (const conetorsion::CutoffInsufficient& e) {
    std::cerr << "error: " << e.what() << " (required cutoff " << e.required_cutoff << ")\n";
    return cli::kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kVerifyFailed;
  }
}
