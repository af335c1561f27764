#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frm/common/audit_record.hpp"
#include "frm/register/snapshot.hpp"

namespace frm::registry {

// Engine-wide settings the register operations depend on.
struct Settings {
  double enhancement_margin = 0.0;  // added to KRI values elicited without enhancements
  governance::GovernanceConfig governance;
};

indicators::RecencyWindow window_at(const Snapshot& s, Timestamp as_of);

// Indicator context reflecting the current measurements. KRIs without an
// in-window measurement take their scale maximum; KCIs never measured take
// their weakest level.
riskmodel::IndicatorContext live_context(const Snapshot& s, double margin, Timestamp as_of);

// Entry as submitted, before the engine fills in the computed risk levels.
// Absent fields stay empty so that the first missing one can be named.
struct EntryDraft {
  std::optional<std::string> risk_id;
  std::optional<std::string> risk_owner;
  std::optional<std::string> model_id;
  std::optional<std::vector<std::string>> kris;
  std::optional<std::vector<MitigationStatus>> kcis;
  std::optional<std::vector<std::string>> mapping;  // rule ids
  std::optional<std::vector<PlannedAction>> action_plan;
};

// Throws MissingField naming the absent field, SchemaViolation otherwise.
EntryDraft decode_entry_draft(const Json& j);

struct RiskLevels {
  riskmodel::QuantifiedRisk inherent;
  riskmodel::QuantifiedRisk residual;
};

// Inherent risk puts every KCI of the entry's model at its weakest level;
// residual risk uses the level of each operational mitigation.
RiskLevels entry_levels(const Snapshot& s, const RegisterEntry& e,
                        const riskmodel::IndicatorContext& live);

// Validates and stores an entry, computing its risk levels and the expected
// residual of every mapped rule. Throws MissingField, UnknownOwner,
// ResidualExceedsInherent, NotFound.
const RegisterEntry& upsert_entry(Snapshot& s, const EntryDraft& draft, const Settings& settings,
                                  Timestamp now, AuditBuffer& audit, const std::string& actor);

// Refreshes mitigation levels from KCI measurements and recomputes the risk
// levels of every entry.
void recompute_entries(Snapshot& s, const Settings& settings, Timestamp now);

// In-scope domains with neither a register entry nor an open action item.
std::vector<std::string> completeness_gaps(const Snapshot& s);

// Residual rate per domain: the sum over entries whose model belongs to it.
std::map<std::string, riskmodel::QuantifiedRisk> domain_residuals(const Snapshot& s);

struct RuleOutcome {
  std::vector<indicators::RuleStatus> statuses;
  std::vector<std::string> new_escalations;
  std::vector<std::string> new_breaches;
};

// Re-evaluates every rule at `now`. A rule entering the breached state opens
// a breach record and an escalation and puts development on hold; a rule
// leaving it closes the breach record.
RuleOutcome apply_rules(Snapshot& s, const Settings& settings, Timestamp now, AuditBuffer& audit,
                        const std::string& actor);

// Validates and stores measurements, updates the evaluation schedule, then
// applies the rules.
RuleOutcome record_measurements(Snapshot& s, const std::vector<indicators::Measurement>& batch,
                                const Settings& settings, Timestamp now, AuditBuffer& audit,
                                const std::string& actor);

// Resolves an escalation under the escalation_resolution approval policy.
// The hold is lifted once no rule is breached and every breach escalation
// is resolved.
const governance::EscalationEvent& resolve_escalation(
    Snapshot& s, const std::string& escalation_id, const std::string& decision,
    const std::vector<governance::Approval>& approvals, const Settings& settings, Timestamp now,
    AuditBuffer& audit, const std::string& actor);

// Lifts the hold when its conditions are gone. Returns whether it changed.
bool release_hold_if_clear(Snapshot& s);

struct WhatIf {
  std::map<std::string, double> kri_values;       // by KRI id
  std::map<std::string, std::string> kci_levels;  // by KCI id; meets/fails for continuous KCIs
  std::map<std::string, double> kci_values;       // continuous KCIs
};

struct WhatIfResult {
  std::map<std::string, RiskLevels> entries;
  std::vector<indicators::RuleStatus> statuses;
  std::optional<tolerance::ComplianceReport> compliance;
};

// Recomputes entry risk levels and rule statuses with the overrides applied.
// Never modifies the snapshot.
WhatIfResult what_if(const Snapshot& s, const WhatIf& overrides, const Settings& settings,
                     Timestamp now);

}  // namespace frm::registry
