#pragma once

#include <json.hpp>

#include "nls/config.hpp"
#include "nls/conserve.hpp"

namespace nls {

// Analytics document keyed by functional name: per-snapshot arrays plus summary scalars.
// Functionals whose hypotheses fail are recorded as {"skipped": reason}.
nlohmann::json analytics_report(const Trajectory& traj, const DiagnosticsToggles& toggles,
                                const std::vector<DiagnosticsRecord>& rows);

}  // namespace nls
