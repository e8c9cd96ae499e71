#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nls/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nls-lab: pseudo-spectral NLS simulator and diagnostics"};
  app.require_subcommand(1);
  std::string out = "nls-out";
  app.add_option("--out", out, "Output root directory")->capture_default_str();

  std::string cfg_path, resume;
  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("config", cfg_path, "TOML config")->required();
  run->add_option("--resume", resume, "Continue from a trajectory directory");
  run->add_option("--out", out, "Output root directory");

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run the property suites");
  verify->add_option("suite", suite, "grid|field|nonlin|evolve|conserve|morawetz|scaling|all")->capture_default_str();
  std::string verify_out;
  verify->add_option("--out", verify_out, "Write verify.json here");

  std::string axis, values;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("config", cfg_path, "TOML config template")->required();
  sweep->add_option("--axis", axis, "Parameter name")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out, "Output root directory");

  std::string dir, diag_out;
  auto* diagnose = app.add_subcommand("diagnose", "Recompute analytics for a stored trajectory");
  diagnose->add_option("dir", dir, "Trajectory directory")->required();
  diagnose->add_option("--out", diag_out, "Output directory (defaults to the trajectory directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nls::exit_code::kConfig;
  }

  if (*run) return nls::cmd_run(cfg_path, out, resume, std::cout);
  if (*verify) return nls::cmd_verify(suite, verify_out, std::cout);
  if (*sweep) return nls::cmd_sweep(cfg_path, axis, values, out, std::cout);
  if (*diagnose) return nls::cmd_diagnose(dir, diag_out, std::cout);
  return nls::exit_code::kConfig;
}
