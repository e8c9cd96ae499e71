#pragma once

#include <string>

#include <json.hpp>

#include "nls/evolve.hpp"

namespace nls {

nlohmann::json to_json(const Params& p);
nlohmann::json to_json(const StepperConfig& c);
Params params_from_json(const nlohmann::json& j);
StepperConfig stepper_from_json(const nlohmann::json& j);

// Writes snapshots/snap_NNNNN.nlsf, snapshots/h_NNNNN.nlsf and manifest.json under dir.
// `extra` keys are merged into the manifest.
void save_trajectory(const std::string& dir, const Trajectory& traj, const nlohmann::json& extra = nlohmann::json::object());
Trajectory load_trajectory(const std::string& dir);
nlohmann::json load_manifest(const std::string& dir);

}  // namespace nls
