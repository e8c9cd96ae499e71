#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nls/config.hpp"
#include "nls/conserve.hpp"

namespace nls {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kConfig = 2;
inline constexpr int kRun = 3;
inline constexpr int kIo = 4;
}  // namespace exit_code

int exit_code_for(const Error& e);

struct RunResult {
  Trajectory traj;
  std::vector<DiagnosticsRecord> rows;
  nlohmann::json analytics;
  std::string hash;
};

// Evolves the configured problem (or continues `resume`) and computes all enabled diagnostics.
RunResult execute_run(const RunConfig& cfg, const std::optional<Trajectory>& resume = std::nullopt);
// Writes manifest.json, snapshots/, diagnostics.csv and analytics.json under out.
void write_run_outputs(const std::string& out, const RunConfig& cfg, const RunResult& result);

int cmd_run(const std::string& cfg_path, const std::string& out, const std::string& resume_dir, std::ostream& log);
int cmd_sweep(const std::string& cfg_path, const std::string& axis, const std::string& values, const std::string& out,
              std::ostream& log);
int cmd_diagnose(const std::string& dir, const std::string& out, std::ostream& log);

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double value = 0;
  double limit = 0;
  std::string detail;
};

std::vector<std::string> verify_suites();
// Runs one suite ("grid", ..., "scaling") or "all".
std::vector<CheckResult> run_verify(const std::string& suite);
int cmd_verify(const std::string& suite, const std::string& out, std::ostream& log);

std::vector<double> parse_csv_values(const std::string& csv);

}  // namespace nls
