#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "frm/common/time.hpp"

namespace frm::governance {

enum class RoleKind {
  RiskOwner,
  Cro,
  ErmStaff,
  SeniorManager,
  BoardAuditCommittee,
  InternalAudit,
  ExternalAuditor,
};

std::string_view to_string(RoleKind kind);
RoleKind parse_role_kind(std::string_view name);

// Management roles take or advise on risk decisions; audit roles must stay
// independent of them.
bool is_management(RoleKind kind);
bool is_audit(RoleKind kind);

struct Role {
  std::string id;
  RoleKind kind = RoleKind::RiskOwner;
  std::string person;

  bool operator==(const Role&) const = default;
};

enum class ActionKind {
  GateTransition,
  BudgetReallocation,
  Exclusion,
  ThresholdChange,
  EscalationResolution,
};

std::string_view to_string(ActionKind kind);
ActionKind parse_action_kind(std::string_view name);  // throws UnknownAction

struct ApprovalRule {
  std::vector<RoleKind> required;
  std::vector<RoleKind> forbidden;

  bool operator==(const ApprovalRule&) const = default;
};

struct ApprovalPolicy {
  std::map<ActionKind, ApprovalRule> rules;

  // Throws InvalidArgument when a role is both required and forbidden.
  void validate() const;

  bool operator==(const ApprovalPolicy&) const = default;
};

ApprovalPolicy default_policy();

enum class Tier { Low, Medium, High };
std::string_view to_string(Tier tier);
Tier parse_tier(std::string_view name);

struct EscalationTiers {
  std::chrono::seconds high{24 * 3600};
  std::chrono::seconds medium{7 * 24 * 3600};
  std::chrono::seconds low{30 * 24 * 3600};

  std::chrono::seconds deadline_for(Tier tier) const;
  bool operator==(const EscalationTiers&) const = default;
};

struct GovernanceConfig {
  std::vector<Role> roles;
  ApprovalPolicy policy = default_policy();
  EscalationTiers tiers;
  std::vector<std::string> culture_checklist;

  const Role* find_role(std::string_view id) const;
  bool operator==(const GovernanceConfig&) const = default;
};

struct SeparationViolation {
  std::string rule;
  std::string person;
  std::string detail;

  bool operator==(const SeparationViolation&) const = default;
};

// Report-only structural checks over role assignments; output is sorted.
std::vector<SeparationViolation> check_separation(const std::vector<Role>& assignments);

struct Approval {
  std::string role_id;
  bool approve = true;

  bool operator==(const Approval&) const = default;
};

struct ApprovalOutcome {
  bool allowed = false;
  std::string reason;  // empty when allowed
  std::vector<std::string> approved_by;
};

// Allowed iff every required role kind has an approving role and no
// forbidden role kind took part. Approvals naming unknown role ids block.
ApprovalOutcome require_approval(ActionKind action, const ApprovalPolicy& policy,
                                 const std::vector<Approval>& approvals,
                                 const std::vector<Role>& roles);

struct Resolution {
  std::string by;  // role id
  Timestamp at;
  std::string decision;

  bool operator==(const Resolution&) const = default;
};

struct EscalationEvent {
  std::string id;
  std::string source;  // rule id or finding id
  Tier severity = Tier::High;
  Timestamp raised_at;
  std::vector<RoleKind> notify;
  Timestamp deadline;
  std::optional<Resolution> resolution;

  bool open() const { return !resolution.has_value(); }
  bool operator==(const EscalationEvent&) const = default;
};

// Notification chain for a tier: low reaches the risk owner only, medium
// adds the CRO and senior management, high reaches the board audit
// committee as well.
std::vector<RoleKind> notify_chain(Tier tier);

EscalationEvent escalate(std::string id, const std::string& source, Tier severity, Timestamp now,
                         const EscalationTiers& tiers, const std::set<std::string>& known_sources);

// Records the resolution; throws IllegalTransition if already resolved.
void resolve(EscalationEvent& event, Resolution resolution);

std::vector<std::string> overdue(const std::vector<EscalationEvent>& events, Timestamp now);

}  // namespace frm::governance
