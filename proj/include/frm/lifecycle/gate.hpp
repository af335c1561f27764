#pragma once

#include <string>
#include <vector>

#include "frm/common/audit_record.hpp"
#include "frm/register/operations.hpp"

namespace frm::lifecycle {

struct GateCheck {
  std::string name;
  bool pass = false;
  std::string evidence;
};

struct GateDecision {
  Phase from = Phase::Planning;
  Phase to = Phase::Training;
  std::vector<GateCheck> checks;
  std::vector<std::string> approved_by;
  bool approval_allowed = false;
  bool pass = false;  // every check passes and the approval policy is met

  const GateCheck* check(std::string_view name) const;
  Json to_json() const;
};

// Check names, in evaluation order.
inline constexpr std::string_view kCheckToleranceBudget = "a_tolerance_and_budget";
inline constexpr std::string_view kCheckDomainsModeled = "b_domains_modeled";
inline constexpr std::string_view kCheckMitigationsPlanned = "c_mitigations_planned";
inline constexpr std::string_view kCheckNoBreach = "d_no_breached_rule";
inline constexpr std::string_view kCheckRedTeam = "e_redteam_record";
inline constexpr std::string_view kCheckFindings = "f_high_severity_findings";
inline constexpr std::string_view kCheckApprovals = "g_approvals";

// Pure over the snapshot. Planning to training runs checks a-c, training to
// deployed runs d-f; both require gate_transition approval (g). Throws
// NotNextPhase.
GateDecision evaluate_gate(const registry::Snapshot& s, Phase target,
                           const std::vector<governance::Approval>& approvals,
                           const registry::Settings& settings, Timestamp as_of);

// Advances the phase. The hold flag blocks regardless of the decision.
// Throws HoldActive, GateFailed, NotNextPhase.
void transition(registry::Snapshot& s, const GateDecision& decision, Timestamp now,
                AuditBuffer& audit, const std::string& actor);

}  // namespace frm::lifecycle
