#include "frm/governance/governance.hpp"

#include <algorithm>
#include <tuple>

#include "frm/common/error.hpp"

namespace frm::governance {

std::string_view to_string(RoleKind kind) {
  switch (kind) {
    case RoleKind::RiskOwner: return "risk_owner";
    case RoleKind::Cro: return "cro";
    case RoleKind::ErmStaff: return "erm_staff";
    case RoleKind::SeniorManager: return "senior_manager";
    case RoleKind::BoardAuditCommittee: return "board_audit_committee";
    case RoleKind::InternalAudit: return "internal_audit";
    case RoleKind::ExternalAuditor: return "external_auditor";
  }
  return "risk_owner";
}

RoleKind parse_role_kind(std::string_view name) {
  for (auto k : {RoleKind::RiskOwner, RoleKind::Cro, RoleKind::ErmStaff, RoleKind::SeniorManager,
                 RoleKind::BoardAuditCommittee, RoleKind::InternalAudit,
                 RoleKind::ExternalAuditor}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown role kind " + std::string(name));
}

bool is_management(RoleKind kind) {
  return kind == RoleKind::RiskOwner || kind == RoleKind::Cro || kind == RoleKind::ErmStaff ||
         kind == RoleKind::SeniorManager;
}

bool is_audit(RoleKind kind) {
  return kind == RoleKind::InternalAudit || kind == RoleKind::ExternalAuditor;
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::GateTransition: return "gate_transition";
    case ActionKind::BudgetReallocation: return "budget_reallocation";
    case ActionKind::Exclusion: return "exclusion";
    case ActionKind::ThresholdChange: return "threshold_change";
    case ActionKind::EscalationResolution: return "escalation_resolution";
  }
  return "gate_transition";
}

ActionKind parse_action_kind(std::string_view name) {
  for (auto k : {ActionKind::GateTransition, ActionKind::BudgetReallocation,
                 ActionKind::Exclusion, ActionKind::ThresholdChange,
                 ActionKind::EscalationResolution}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::UnknownAction, std::string(name));
}

void ApprovalPolicy::validate() const {
  for (const auto& [action, rule] : rules) {
    for (auto kind : rule.required) {
      if (std::find(rule.forbidden.begin(), rule.forbidden.end(), kind) != rule.forbidden.end()) {
        throw Error(ErrorCode::InvalidArgument, std::string(to_string(action)) + ": role " +
                                                    std::string(to_string(kind)) +
                                                    " is both required and forbidden");
      }
    }
  }
}

ApprovalPolicy default_policy() {
  const std::vector<RoleKind> audit = {RoleKind::InternalAudit, RoleKind::ExternalAuditor};
  ApprovalPolicy p;
  p.rules[ActionKind::GateTransition] = {{RoleKind::RiskOwner, RoleKind::Cro}, audit};
  p.rules[ActionKind::BudgetReallocation] = {{RoleKind::SeniorManager, RoleKind::Cro}, audit};
  p.rules[ActionKind::Exclusion] = {{}, audit};
  p.rules[ActionKind::ThresholdChange] = {{RoleKind::RiskOwner, RoleKind::Cro}, audit};
  p.rules[ActionKind::EscalationResolution] = {{RoleKind::RiskOwner, RoleKind::SeniorManager},
                                               audit};
  return p;
}

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::Low: return "low";
    case Tier::Medium: return "medium";
    case Tier::High: return "high";
  }
  return "high";
}

Tier parse_tier(std::string_view name) {
  if (name == "low") return Tier::Low;
  if (name == "medium" || name == "med") return Tier::Medium;
  if (name == "high") return Tier::High;
  throw Error(ErrorCode::InvalidArgument, "unknown severity " + std::string(name));
}

std::chrono::seconds EscalationTiers::deadline_for(Tier tier) const {
  switch (tier) {
    case Tier::Low: return low;
    case Tier::Medium: return medium;
    case Tier::High: return high;
  }
  return high;
}

const Role* GovernanceConfig::find_role(std::string_view id) const {
  auto it = std::find_if(roles.begin(), roles.end(), [&](const Role& r) { return r.id == id; });
  return it == roles.end() ? nullptr : &*it;
}

std::vector<SeparationViolation> check_separation(const std::vector<Role>& assignments) {
  std::map<std::string, std::set<RoleKind>> by_person;
  bool has_board = false;
  bool has_internal_audit = false;
  for (const auto& r : assignments) {
    by_person[r.person].insert(r.kind);
    has_board = has_board || r.kind == RoleKind::BoardAuditCommittee;
    has_internal_audit = has_internal_audit || r.kind == RoleKind::InternalAudit;
  }

  std::vector<SeparationViolation> out;
  for (const auto& [person, kinds] : by_person) {
    if (kinds.count(RoleKind::Cro) != 0 && kinds.count(RoleKind::RiskOwner) != 0) {
      out.push_back({"cro_not_risk_owner", person,
                     "the CRO advises and challenges and must not own risks"});
    }
    if (kinds.count(RoleKind::InternalAudit) != 0) {
      for (auto k : kinds) {
        if (is_management(k)) {
          out.push_back({"audit_independent_of_management", person,
                         "internal audit also holds " + std::string(to_string(k))});
        }
      }
    }
  }
  if (has_internal_audit && !has_board) {
    out.push_back({"audit_reports_to_board", "",
                   "internal audit exists but no board audit committee is assigned"});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.rule, a.person, a.detail) < std::tie(b.rule, b.person, b.detail);
  });
  return out;
}

ApprovalOutcome require_approval(ActionKind action, const ApprovalPolicy& policy,
                                 const std::vector<Approval>& approvals,
                                 const std::vector<Role>& roles) {
  auto rule_it = policy.rules.find(action);
  if (rule_it == policy.rules.end()) throw Error(ErrorCode::UnknownAction, std::string(to_string(action)));
  const ApprovalRule& rule = rule_it->second;

  ApprovalOutcome out;
  std::set<RoleKind> approving;
  for (const auto& a : approvals) {
    auto role = std::find_if(roles.begin(), roles.end(),
                             [&](const Role& r) { return r.id == a.role_id; });
    if (role == roles.end()) {
      out.reason = "unknown role " + a.role_id;
      return out;
    }
    if (std::find(rule.forbidden.begin(), rule.forbidden.end(), role->kind) !=
        rule.forbidden.end()) {
      out.reason = "forbidden role " + std::string(to_string(role->kind)) + " (" + a.role_id +
                   ") took part";
      return out;
    }
    if (a.approve) {
      approving.insert(role->kind);
      out.approved_by.push_back(a.role_id);
    }
  }
  std::vector<std::string> missing;
  for (auto kind : rule.required) {
    if (approving.count(kind) == 0) missing.emplace_back(to_string(kind));
  }
  if (!missing.empty()) {
    out.reason = "missing required approval:";
    for (const auto& m : missing) out.reason += " " + m;
    out.approved_by.clear();
    return out;
  }
  out.allowed = true;
  return out;
}

std::vector<RoleKind> notify_chain(Tier tier) {
  std::vector<RoleKind> chain = {RoleKind::RiskOwner, RoleKind::Cro, RoleKind::SeniorManager,
                                 RoleKind::BoardAuditCommittee};
  switch (tier) {
    case Tier::Low: chain.resize(1); break;
    case Tier::Medium: chain.resize(3); break;
    case Tier::High: break;
  }
  return chain;
}

EscalationEvent escalate(std::string id, const std::string& source, Tier severity, Timestamp now,
                         const EscalationTiers& tiers, const std::set<std::string>& known_sources) {
  if (known_sources.count(source) == 0) throw Error(ErrorCode::UnknownSource, source);
  EscalationEvent e;
  e.id = std::move(id);
  e.source = source;
  e.severity = severity;
  e.raised_at = now;
  e.notify = notify_chain(severity);
  e.deadline = now + tiers.deadline_for(severity);
  return e;
}

void resolve(EscalationEvent& event, Resolution resolution) {
  if (!event.open()) throw Error(ErrorCode::IllegalTransition, event.id + " already resolved");
  event.resolution = std::move(resolution);
}

std::vector<std::string> overdue(const std::vector<EscalationEvent>& events, Timestamp now) {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (e.open() && now > e.deadline) out.push_back(e.id);
  }
  return out;
}

}  // namespace frm::governance
