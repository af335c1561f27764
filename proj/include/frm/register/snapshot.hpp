#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frm/common/canonical.hpp"
#include "frm/governance/governance.hpp"
#include "frm/identification/identification.hpp"
#include "frm/indicators/catalog.hpp"
#include "frm/indicators/rules.hpp"
#include "frm/indicators/schedule.hpp"
#include "frm/lifecycle/state.hpp"
#include "frm/riskmodel/model.hpp"
#include "frm/tolerance/tolerance.hpp"

namespace frm::registry {

inline constexpr std::int64_t kFormatVersion = 1;

struct MitigationStatus {
  std::string kci_id;
  std::string level;            // ordered KCIs; "meets"/"fails" for continuous ones
  std::optional<double> value;  // continuous KCIs
  bool operational = false;

  bool operator==(const MitigationStatus&) const = default;
};

struct RuleMapping {
  std::string rule_id;
  double expected_residual = 0.0;  // chain rate at the rule's KRI threshold and required KCI

  bool operator==(const RuleMapping&) const = default;
};

struct PlannedAction {
  std::string what;
  std::string who;
  Timestamp due;
  std::string resources;

  bool operator==(const PlannedAction&) const = default;
};

// One row of the risk register.
struct RegisterEntry {
  std::string risk_id;
  std::string risk_owner;  // role id
  std::string model_id;
  riskmodel::QuantifiedRisk inherent_risk;  // every KCI at its weakest level
  riskmodel::QuantifiedRisk residual_risk;  // operational KCIs at their current level
  std::vector<std::string> kris;
  std::vector<MitigationStatus> kcis;
  std::vector<RuleMapping> mapping;
  std::vector<PlannedAction> action_plan;

  bool operator==(const RegisterEntry&) const = default;
};

// A period during which a rule stood breached.
struct BreachRecord {
  std::string id;
  std::string rule_id;
  Timestamp triggered_at;
  std::optional<double> kri_value;
  std::optional<std::string> kci_observed;
  std::string escalation_id;
  std::optional<Timestamp> cleared_at;
  std::vector<std::string> actions;

  bool operator==(const BreachRecord&) const = default;
};

// The whole register document.
struct Snapshot {
  std::int64_t format_version = kFormatVersion;
  std::optional<tolerance::BudgetLedger> budget;
  std::map<std::string, riskmodel::RiskModel> models;
  indicators::Catalog catalog;
  std::map<std::string, indicators::IfThenRule> rules;
  std::vector<indicators::Measurement> measurements;
  identification::Universe universe;
  std::map<std::string, RegisterEntry> entries;
  std::vector<governance::EscalationEvent> escalations;
  std::map<std::string, indicators::RuleStatus> rule_statuses;
  std::vector<BreachRecord> breaches;
  lifecycle::LifecycleState lifecycle;
  std::vector<lifecycle::PlannedMitigation> planned_mitigations;
  std::vector<lifecycle::RedTeamRecord> redteam_records;
  indicators::EvaluationSchedule schedule;
  std::uint64_t next_escalation = 1;
  std::uint64_t next_breach = 1;
  // Number of audit events committed with this document and the last hash.
  std::uint64_t audit_count = 0;
  std::string audit_head;
  // Unknown fields found on import, keyed by location ("$", "entries/<id>",
  // "models/<id>", "measurements/<index>", ...), written back on export.
  std::map<std::string, Json> extras;

  std::vector<indicators::IfThenRule> rule_list() const;
  const governance::EscalationEvent* find_escalation(const std::string& id) const;
  governance::EscalationEvent* find_escalation(const std::string& id);

  bool operator==(const Snapshot&) const = default;
};

}  // namespace frm::registry
