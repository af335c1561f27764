#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frm/indicators/catalog.hpp"

namespace frm::indicators {

inline constexpr double kDefaultRecencyDays = 90.0;

// Measurements count toward a KRI's effective value when they fall in
// [start, as_of]. The window opens at the last model-weight change when one
// is known, otherwise kDefaultRecencyDays before `as_of`.
struct RecencyWindow {
  Timestamp as_of;
  std::optional<Timestamp> weights_changed_at;

  Timestamp start() const;
  bool contains(Timestamp t) const { return t >= start() && t <= as_of; }
};

// Upper-bound capability estimate: the maximum in-window value, with
// `margin` added to values elicited without post-training enhancements,
// clamped to the scale maximum. Throws NoMeasurements.
double effective_kri_value(const Kri& kri, const std::vector<Measurement>& history, double margin,
                           const RecencyWindow& window);

// Latest KCI measurement at or before `as_of`, as a level name. Continuous
// KCIs report "meets"/"fails" against the metric's bound.
std::optional<std::string> current_kci_level(const Kci& kci, const std::vector<Measurement>& history,
                                             Timestamp as_of);

enum class RuleState { NotTriggered, Satisfied, Breached };
std::string_view to_string(RuleState state);
RuleState parse_rule_state(std::string_view name);

struct RuleStatus {
  std::string rule_id;
  bool kri_triggered = false;
  bool kci_met = false;
  RuleState state = RuleState::NotTriggered;
  Timestamp evaluated_at;
  std::optional<double> kri_value;
  std::optional<std::string> kci_observed;  // level, or the raw value for continuous KCIs
  std::string required_action;               // "hold" when breached

  bool operator==(const RuleStatus&) const = default;
};

struct EscalationRequest {
  std::string rule_id;
  std::string severity;
};

struct RuleEvaluation {
  std::vector<RuleStatus> statuses;           // same order as the rules
  std::vector<EscalationRequest> escalations;  // one per breached rule
};

// Triggered iff effective KRI value >= threshold; a KRI with no in-window
// measurements does not trigger. Throws MissingKciMeasurement when a
// triggered rule's KCI has never been measured.
RuleEvaluation evaluate_rules(const Catalog& catalog, const std::vector<IfThenRule>& rules,
                              const std::vector<Measurement>& history, double margin,
                              const RecencyWindow& window);

// Whether an observed KCI state satisfies a rule requirement.
bool requirement_met(const Kci& kci, const KciRequirement& required,
                     const std::vector<Measurement>& history, Timestamp as_of);

}  // namespace frm::indicators
