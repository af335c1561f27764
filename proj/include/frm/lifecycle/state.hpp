#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frm/common/time.hpp"

namespace frm::lifecycle {

enum class Phase { Planning, Training, Deployed };

std::string_view to_string(Phase phase);
Phase parse_phase(std::string_view name);
std::optional<Phase> next_phase(Phase phase);

struct PhaseTransition {
  Phase from = Phase::Planning;
  Phase to = Phase::Training;
  Timestamp at;
  std::vector<std::string> evidence;
  std::vector<std::string> approved_by;

  bool operator==(const PhaseTransition&) const = default;
};

struct LifecycleState {
  Phase phase = Phase::Planning;
  std::string model_label;
  double effective_compute = 0.0;  // FLOP used so far
  double planned_compute = 0.0;    // FLOP budget for the training run
  std::optional<Timestamp> weights_changed_at;
  // Set together with a rule breach; cleared once every breach escalation
  // has a governance-approved resolution.
  bool hold = false;
  std::string hold_reason;
  std::vector<PhaseTransition> history;

  bool operator==(const LifecycleState&) const = default;
};

// A mitigation committed to ahead of need: the KCI level it will reach.
struct PlannedMitigation {
  std::string kci_id;
  std::string level;
  std::string description;

  bool operator==(const PlannedMitigation&) const = default;
};

// Record of an open-ended red-teaming exercise on a given model.
struct RedTeamRecord {
  std::string id;
  std::string model_label;
  Timestamp at;
  std::string summary;

  bool operator==(const RedTeamRecord&) const = default;
};

}  // namespace frm::lifecycle
