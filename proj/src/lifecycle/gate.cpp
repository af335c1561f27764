#include "frm/lifecycle/gate.hpp"

#include <algorithm>

#include "frm/common/error.hpp"
#include "frm/indicators/forecast.hpp"
#include "frm/indicators/solve.hpp"

namespace frm::lifecycle {
namespace {

using registry::Snapshot;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

GateCheck check_tolerance_budget(const Snapshot& s) {
  if (!s.budget) return {std::string(kCheckToleranceBudget), false, "no risk tolerance or budget defined"};
  try {
    s.budget->total.validate();
    s.budget->validate();
  } catch (const Error& e) {
    return {std::string(kCheckToleranceBudget), false, e.what()};
  }
  if (s.budget->allocations.empty()) {
    return {std::string(kCheckToleranceBudget), false, "budget has no allocations"};
  }
  return {std::string(kCheckToleranceBudget), true,
          std::to_string(s.budget->allocations.size()) + " domain allocations"};
}

GateCheck check_domains_modeled(const Snapshot& s) {
  std::vector<std::string> missing;
  std::size_t in_scope = 0;
  for (const auto& [id, d] : s.universe.domains) {
    if (d.status != identification::DomainStatus::InScope) continue;
    ++in_scope;
    std::set<std::string> models(d.linked_models.begin(), d.linked_models.end());
    for (const auto& [mid, m] : s.models) {
      if (m.domain == id) models.insert(mid);
    }
    const bool ruled = std::any_of(s.rules.begin(), s.rules.end(), [&](const auto& kv) {
      return models.count(kv.second.linked_model) > 0;
    });
    if (models.empty()) {
      missing.push_back(id + " (no risk model)");
    } else if (!ruled) {
      missing.push_back(id + " (no KRI/KCI rule)");
    }
  }
  if (!missing.empty()) return {std::string(kCheckDomainsModeled), false, join(missing)};
  return {std::string(kCheckDomainsModeled), true, std::to_string(in_scope) + " in-scope domains covered"};
}

// KCI level the rule's mitigation has to reach: the solved minimum when the
// linked model is a scenario chain with a budget allocation, else the level
// the rule itself requires.
std::optional<std::string> needed_level(const Snapshot& s, const indicators::IfThenRule& rule,
                                        const riskmodel::IndicatorContext& ctx, std::string& note) {
  const auto& kci = s.catalog.kci(rule.kci_id);
  std::string required = std::holds_alternative<std::string>(rule.required)
                             ? std::get<std::string>(rule.required)
                             : std::string(indicators::kMeetsLevel);
  auto model = s.models.find(rule.linked_model);
  if (!s.budget || model == s.models.end() || model->second.chain() == nullptr) return required;
  auto alloc = s.budget->allocations.find(rule.tolerance_ref);
  if (alloc == s.budget->allocations.end()) return required;
  try {
    auto sol = indicators::solve_min_kci(*model->second.chain(), ctx, alloc->second, rule.kri_threshold);
    if (!sol.level) {
      note = "no " + kci.id + " level keeps " + rule.linked_model + " within its allocation";
      return std::nullopt;
    }
    if (sol.kci_id != kci.id) return required;
    return kci.level_index(*sol.level) >= kci.level_index(required) ? *sol.level : required;
  } catch (const Error&) {
    return required;
  }
}

GateCheck check_mitigations_planned(const Snapshot& s, const registry::Settings& settings,
                                    Timestamp as_of) {
  const auto ctx = registry::live_context(s, settings.enhancement_margin, as_of);
  std::vector<std::string> gaps;
  std::vector<std::string> notes;
  for (const auto& [id, rule] : s.rules) {
    const auto points = indicators::capability_points(rule.kri_id, s.measurements);
    bool needed = true;
    try {
      const auto f = indicators::forecast_crossing(points, rule.kri_threshold);
      needed = f.crossing_compute && *f.crossing_compute <= s.lifecycle.planned_compute;
      notes.push_back(id + ": crossing " +
                      (f.crossing_compute ? canonical_dump(Json(*f.crossing_compute)) : "not reached"));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientData) throw;
      notes.push_back(id + ": fewer than 2 compute points, mitigation required");
    }
    if (!needed) continue;
    std::string note;
    const auto level = needed_level(s, rule, ctx, note);
    if (!level) {
      gaps.push_back(id + ": " + note);
      continue;
    }
    const auto& kci = s.catalog.kci(rule.kci_id);
    const bool planned = std::any_of(
        s.planned_mitigations.begin(), s.planned_mitigations.end(), [&](const PlannedMitigation& p) {
          return p.kci_id == kci.id && kci.level_index(p.level) >= kci.level_index(*level);
        });
    if (!planned) gaps.push_back(id + ": no planned " + kci.id + " mitigation reaching " + *level);
  }
  if (!gaps.empty()) return {std::string(kCheckMitigationsPlanned), false, join(gaps)};
  return {std::string(kCheckMitigationsPlanned), true, notes.empty() ? "no rules" : join(notes)};
}

GateCheck check_no_breach(const Snapshot& s) {
  std::vector<std::string> bad;
  for (const auto& [id, st] : s.rule_statuses) {
    if (st.state == indicators::RuleState::Breached) bad.push_back(id + " breached");
  }
  for (const auto& b : s.breaches) {
    const auto* e = s.find_escalation(b.escalation_id);
    if (e != nullptr && e->open()) bad.push_back(e->id + " unresolved");
  }
  if (!bad.empty()) return {std::string(kCheckNoBreach), false, join(bad)};
  return {std::string(kCheckNoBreach), true, "no breached rules or open breach escalations"};
}

GateCheck check_redteam(const Snapshot& s) {
  for (const auto& r : s.redteam_records) {
    if (!s.lifecycle.model_label.empty() && r.model_label == s.lifecycle.model_label) {
      return {std::string(kCheckRedTeam), true, r.id};
    }
  }
  return {std::string(kCheckRedTeam), false,
          "no open-ended red-teaming record for model '" + s.lifecycle.model_label + "'"};
}

GateCheck check_findings(const Snapshot& s) {
  std::vector<std::string> open;
  for (const auto& [id, f] : s.universe.findings) {
    if (f.severity_estimate != governance::Tier::High) continue;
    if (f.stage == identification::Stage::Dismissed || f.promoted_model) continue;
    open.push_back(id);
  }
  if (!open.empty()) return {std::string(kCheckFindings), false, "unresolved: " + join(open)};
  return {std::string(kCheckFindings), true, "all high-severity findings dismissed or modeled"};
}

}  // namespace

const GateCheck* GateDecision::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Json GateDecision::to_json() const {
  Json cs = Json::array();
  for (const auto& c : checks) cs.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"evidence", c.evidence}});
  return Json{{"from", to_string(from)},
              {"to", to_string(to)},
              {"checks", cs},
              {"approved_by", approved_by},
              {"result", pass ? "pass" : "fail"}};
}

GateDecision evaluate_gate(const Snapshot& s, Phase target,
                           const std::vector<governance::Approval>& approvals,
                           const registry::Settings& settings, Timestamp as_of) {
  const auto next = next_phase(s.lifecycle.phase);
  if (!next || *next != target) {
    throw Error(ErrorCode::NotNextPhase, std::string(to_string(s.lifecycle.phase)) + " -> " +
                                             std::string(to_string(target)));
  }
  GateDecision d;
  d.from = s.lifecycle.phase;
  d.to = target;
  if (target == Phase::Training) {
    d.checks.push_back(check_tolerance_budget(s));
    d.checks.push_back(check_domains_modeled(s));
    d.checks.push_back(check_mitigations_planned(s, settings, as_of));
  } else {
    d.checks.push_back(check_no_breach(s));
    d.checks.push_back(check_redteam(s));
    d.checks.push_back(check_findings(s));
  }
  const auto outcome = governance::require_approval(governance::ActionKind::GateTransition,
                                                    settings.governance.policy, approvals,
                                                    settings.governance.roles);
  d.approval_allowed = outcome.allowed;
  d.approved_by = outcome.approved_by;
  d.checks.push_back({std::string(kCheckApprovals), outcome.allowed,
                      outcome.allowed ? join(outcome.approved_by) : outcome.reason});
  d.pass = std::all_of(d.checks.begin(), d.checks.end(), [](const GateCheck& c) { return c.pass; });
  return d;
}

void transition(Snapshot& s, const GateDecision& decision, Timestamp now, AuditBuffer& audit,
                const std::string& actor) {
  if (s.lifecycle.hold) throw Error(ErrorCode::HoldActive, s.lifecycle.hold_reason);
  if (!decision.pass) {
    std::vector<std::string> failed;
    for (const auto& c : decision.checks) {
      if (!c.pass) failed.push_back(c.name + ": " + c.evidence);
    }
    throw Error(ErrorCode::GateFailed, join(failed));
  }
  const auto next = next_phase(s.lifecycle.phase);
  if (decision.from != s.lifecycle.phase || !next || *next != decision.to) {
    throw Error(ErrorCode::NotNextPhase, "decision does not match the current phase");
  }
  PhaseTransition t;
  t.from = decision.from;
  t.to = decision.to;
  t.at = now;
  for (const auto& c : decision.checks) t.evidence.push_back(c.name + ": " + c.evidence);
  t.approved_by = decision.approved_by;
  s.lifecycle.history.push_back(t);
  s.lifecycle.phase = decision.to;
  audit.push_back({AuditKind::Gate, actor, decision.to_json()});
}

}  // namespace frm::lifecycle
