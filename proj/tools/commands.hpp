#pragma once

#include <optional>
#include <string>

namespace conetorsion::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2 };

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::string format;  // empty means the config or command default
  int threads = 0;     // 0 means the config value
  std::optional<double> tolerance;
  std::optional<double> cutoff;
  std::optional<double> epsilon;
  std::string mu;
  bool timing = false;
  int degree = -1;  // dump-spectrum / dump-zeta: -1 means all
  int olver_order = 6;
  std::string verify_group = "all";
};

int run_torsion(const CliOptions& o);
int run_truncated(const CliOptions& o);
int run_anomaly(const CliOptions& o);
int run_scaling(const CliOptions& o);
int run_dump_spectrum(const CliOptions& o);
int run_dump_zeta(const CliOptions& o);
int run_dump_olver(const CliOptions& o);
int run_verify(const CliOptions& o);

}  // namespace conetorsion::cli
