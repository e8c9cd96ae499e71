#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nls/evolve.hpp"

namespace nls {

struct InitialSpec {
  std::string family = "gaussian";  // gaussian | soliton | plane_wave | file
  Real A = 1;
  Real sigma = 1;
  Real chirp = 0;  // gaussian only: extra phase e^{i chirp |x - x0|^2}
  std::vector<Real> x0;
  std::vector<Real> v;
  Real a = 1;
  std::vector<Real> k;
  std::string path;
};

struct DiagnosticsToggles {
  bool conserved = true;
  bool local_residuals = false;
  bool morawetz_11 = true;
  bool morawetz_22 = false;
  bool pseudo_conformal = true;
  bool stability = false;
  bool decay_fit = false;
  bool scaling_checks = false;
  Real decay_t_min = 0;
};

struct RunConfig {
  Params params;
  std::vector<Real> extents;
  std::vector<int> points;
  InitialSpec initial;
  StepperConfig stepper;
  DiagnosticsToggles diagnostics;
  Real theta = 1;  // rescale initial data before the run
  bool write_snapshots = true;
  std::string base_dir = ".";  // resolves relative file paths
};

// Parses a TOML document with sections model, grid, initial, stepper, diagnostics, scaling, output.
// Throws Error(Config) on syntax errors, unknown keys, or invalid values.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
std::string read_text(const std::string& path);

// Sets one scalar key ("stepper.dt", or alias "dt") in a config document and returns the new text.
std::string override_config(const std::string& text, const std::string& key, const std::string& value);
std::string resolve_axis(const std::string& key);

nlohmann::json to_json(const RunConfig& c);
std::uint64_t fnv1a64(const std::string& s);
std::string config_hash(const RunConfig& c);

GridPtr make_grid(const RunConfig& c);
// Builds the initial field (after optional rescale by theta).
Field make_initial(const RunConfig& c, const GridPtr& grid);
Field make_initial(const InitialSpec& spec, const GridPtr& grid, const std::string& base_dir = ".");

}  // namespace nls
