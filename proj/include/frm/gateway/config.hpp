#pragma once

#include <filesystem>
#include <string>

#include "frm/register/operations.hpp"

namespace frm::gateway {

// Engine configuration file, in the canonical document syntax:
// {
//   "enhancement_margin": 0,
//   "governance": {"roles": [...], "policies": {...}, "escalation_tiers": {...},
//                  "culture_checklist": [...]},
//   "schedule": {"compute_growth_factor": 4, "max_interval_days": 180},
//   "store_path": "..."
// }
// Every key is optional; unknown keys are rejected with their path.
struct Config {
  double compute_growth_factor = 4.0;  // (1, 1000]
  double max_interval_days = 180.0;    // [1, 3650]
  double enhancement_margin = 0.0;     // [0, 1e6], in KRI units
  governance::GovernanceConfig governance;
  std::string store_path;

  registry::Settings settings() const;
  bool operator==(const Config&) const = default;
};

Config decode_config(const Json& j);  // throws SchemaViolation
Json encode_config(const Config& c);
Config load_config(const std::filesystem::path& file);

}  // namespace frm::gateway
