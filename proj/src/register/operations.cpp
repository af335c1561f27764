#include "frm/register/operations.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "frm/common/error.hpp"
#include "frm/register/codec.hpp"

namespace frm::registry {
namespace {

using indicators::Kci;
using indicators::KciMetric;
using indicators::Measurement;
using indicators::RuleState;
using indicators::RuleStatus;
using riskmodel::IndicatorContext;
using riskmodel::QuantifiedRisk;

std::string numbered(const char* prefix, std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%04llu", prefix, static_cast<unsigned long long>(n));
  return buf;
}

const Measurement* latest_of(const std::vector<Measurement>& history, const std::string& id,
                             Timestamp as_of) {
  const Measurement* best = nullptr;
  for (const auto& m : history) {
    if (m.indicator_id != id || m.timestamp > as_of) continue;
    if (best == nullptr || m.timestamp >= best->timestamp) best = &m;
  }
  return best;
}

const riskmodel::RiskModel& model_of(const Snapshot& s, const std::string& id) {
  auto it = s.models.find(id);
  if (it == s.models.end()) throw Error(ErrorCode::NotFound, "model " + id);
  return it->second;
}

const indicators::IfThenRule& rule_of(const Snapshot& s, const std::string& id) {
  auto it = s.rules.find(id);
  if (it == s.rules.end()) throw Error(ErrorCode::NotFound, "rule " + id);
  return it->second;
}

// KCI ids a scenario chain depends on.
std::set<std::string> chain_kcis(const riskmodel::ScenarioChain& chain, const IndicatorContext& ctx) {
  std::set<std::string> out;
  for (const auto& table_id : riskmodel::kci_tables_of(chain)) {
    auto it = ctx.kci_tables.find(table_id);
    if (it != ctx.kci_tables.end()) out.insert(it->second.kci_id);
  }
  return out;
}

std::string level_of_requirement(const Kci& kci, const indicators::KciRequirement& required) {
  if (const auto* level = std::get_if<std::string>(&required)) return *level;
  (void)kci;
  return std::string(indicators::kMeetsLevel);
}

// Brings mitigation statuses in line with the latest KCI measurements.
void refresh_mitigations(const Snapshot& s, RegisterEntry& e, Timestamp now) {
  for (auto& status : e.kcis) {
    auto kci = s.catalog.kcis.find(status.kci_id);
    if (kci == s.catalog.kcis.end()) continue;
    const Measurement* m = latest_of(s.measurements, status.kci_id, now);
    if (m == nullptr) continue;
    if (kci->second.metric.kind == KciMetric::Kind::OrderedLevels) {
      if (m->level) status.level = *m->level;
    } else {
      status.value = m->value;
      status.level = std::string(m->value <= kci->second.metric.bound ? indicators::kMeetsLevel
                                                                       : indicators::kFailsLevel);
    }
  }
}

Json encode_statuses(const std::vector<RuleStatus>& statuses) {
  Json out = Json::array();
  for (const auto& st : statuses) out.push_back(encode(st));
  return out;
}

bool hold_conditions_present(const Snapshot& s) {
  for (const auto& [id, st] : s.rule_statuses) {
    if (st.state == RuleState::Breached) return true;
  }
  for (const auto& b : s.breaches) {
    const auto* e = s.find_escalation(b.escalation_id);
    if (e != nullptr && e->open()) return true;
  }
  return false;
}

std::map<std::string, QuantifiedRisk> residuals_by_domain(
    const Snapshot& s, const std::map<std::string, RiskLevels>& levels) {
  std::map<std::string, QuantifiedRisk> out;
  for (const auto& [id, lv] : levels) {
    const auto& entry = s.entries.at(id);
    auto model = s.models.find(entry.model_id);
    if (model == s.models.end()) continue;
    auto [it, fresh] = out.try_emplace(model->second.domain, lv.residual);
    if (!fresh) it->second.rate += lv.residual.rate;
    it->second.ci95.reset();
  }
  return out;
}

}  // namespace

indicators::RecencyWindow window_at(const Snapshot& s, Timestamp as_of) {
  return indicators::RecencyWindow{as_of, s.lifecycle.weights_changed_at};
}

IndicatorContext live_context(const Snapshot& s, double margin, Timestamp as_of) {
  IndicatorContext ctx = s.catalog.context();
  const auto window = window_at(s, as_of);
  for (const auto& [id, kri] : s.catalog.kris) {
    try {
      ctx.kri_values[id] = indicators::effective_kri_value(kri, s.measurements, margin, window);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoMeasurements) throw;
      ctx.kri_values[id] = kri.scale.hi;
    }
  }
  for (const auto& [id, kci] : s.catalog.kcis) {
    ctx.kci_levels[id] = indicators::current_kci_level(kci, s.measurements, as_of)
                             .value_or(kci.weakest_level());
  }
  return ctx;
}

EntryDraft decode_entry_draft(const Json& j) {
  if (!j.is_object()) schema_error("", "entry must be an object");
  static const char* const kFields[] = {"risk_id", "risk_owner", "model_id", "kris",
                                        "kcis",    "mapping",    "action_plan"};
  for (const char* f : kFields) {
    if (!j.contains(f) || j.at(f).is_null()) throw Error(ErrorCode::MissingField, f);
  }
  ObjectReader r(j, "");
  EntryDraft d;
  d.risk_id = r.str("risk_id");
  d.risk_owner = r.str("risk_owner");
  d.model_id = r.str("model_id");
  d.kris = r.str_list("kris");
  d.kcis.emplace();
  const Json& kcis = r.at("kcis");
  if (!kcis.is_array()) schema_error(".kcis", "expected array");
  for (std::size_t i = 0; i < kcis.size(); ++i) {
    ObjectReader k(kcis[i], r.index_path("kcis", i));
    d.kcis->push_back(MitigationStatus{k.str("kci_id"), k.opt_str("level").value_or(""),
                                       k.opt_num("value"), k.boolean("operational")});
  }
  d.mapping = r.str_list("mapping");
  d.action_plan.emplace();
  const Json& plan = r.at("action_plan");
  const Json* actions = plan.is_object() ? &plan.at("actions") : &plan;
  if (!actions->is_array()) schema_error(".action_plan.actions", "expected array");
  for (std::size_t i = 0; i < actions->size(); ++i) {
    ObjectReader a((*actions)[i], ".action_plan.actions[" + std::to_string(i) + "]");
    d.action_plan->push_back(PlannedAction{a.str("what"), a.str("who"), a.time("due"),
                                           a.opt_str("resources").value_or("")});
  }
  return d;
}

RiskLevels entry_levels(const Snapshot& s, const RegisterEntry& e, const IndicatorContext& live) {
  const auto& model = model_of(s, e.model_id);
  const auto* chain = model.chain();
  if (chain == nullptr) {
    const QuantifiedRisk q = riskmodel::quantify(model, live);
    return {q, q};
  }
  IndicatorContext inherent = live;
  IndicatorContext residual = live;
  for (const auto& kci_id : chain_kcis(*chain, live)) {
    const Kci& kci = s.catalog.kci(kci_id);
    inherent.kci_levels[kci_id] = kci.weakest_level();
    residual.kci_levels[kci_id] = kci.weakest_level();
    for (const auto& status : e.kcis) {
      if (status.kci_id == kci_id && status.operational) residual.kci_levels[kci_id] = status.level;
    }
  }
  return {riskmodel::chain_residual_rate(*chain, inherent),
          riskmodel::chain_residual_rate(*chain, residual)};
}

const RegisterEntry& upsert_entry(Snapshot& s, const EntryDraft& draft, const Settings& settings,
                                  Timestamp now, AuditBuffer& audit, const std::string& actor) {
  if (!draft.risk_id || draft.risk_id->empty()) throw Error(ErrorCode::MissingField, "risk_id");
  if (!draft.risk_owner || draft.risk_owner->empty()) {
    throw Error(ErrorCode::MissingField, "risk_owner");
  }
  if (!draft.model_id || draft.model_id->empty()) throw Error(ErrorCode::MissingField, "model_id");
  if (!draft.kris) throw Error(ErrorCode::MissingField, "kris");
  if (!draft.kcis) throw Error(ErrorCode::MissingField, "kcis");
  if (!draft.mapping) throw Error(ErrorCode::MissingField, "mapping");
  if (!draft.action_plan) throw Error(ErrorCode::MissingField, "action_plan");

  const auto* owner = settings.governance.find_role(*draft.risk_owner);
  if (owner == nullptr) throw Error(ErrorCode::UnknownOwner, *draft.risk_owner + " is not a configured role");
  if (owner->kind != governance::RoleKind::RiskOwner) {
    throw Error(ErrorCode::UnknownOwner, *draft.risk_owner + " holds role " +
                                             std::string(governance::to_string(owner->kind)) +
                                             ", not risk_owner");
  }
  const auto& model = model_of(s, *draft.model_id);

  RegisterEntry e;
  e.risk_id = *draft.risk_id;
  e.risk_owner = *draft.risk_owner;
  e.model_id = *draft.model_id;
  e.kris = *draft.kris;
  e.kcis = *draft.kcis;
  e.action_plan = *draft.action_plan;
  for (const auto& kri : e.kris) s.catalog.kri(kri);
  for (auto& status : e.kcis) {
    const Kci& kci = s.catalog.kci(status.kci_id);
    if (kci.metric.kind == KciMetric::Kind::Continuous && status.value) {
      status.level = std::string(*status.value <= kci.metric.bound ? indicators::kMeetsLevel
                                                                   : indicators::kFailsLevel);
    }
    if (status.level.empty()) status.level = kci.weakest_level();
    kci.level_index(status.level);
  }
  refresh_mitigations(s, e, now);

  const IndicatorContext live = live_context(s, settings.enhancement_margin, now);
  for (const auto& rule_id : *draft.mapping) {
    const auto& rule = rule_of(s, rule_id);
    const auto& linked = model_of(s, rule.linked_model);
    double expected = 0.0;
    if (const auto* chain = linked.chain()) {
      IndicatorContext at_rule = live;
      at_rule.kri_values[rule.kri_id] = rule.kri_threshold;
      at_rule.kci_levels[rule.kci_id] =
          level_of_requirement(s.catalog.kci(rule.kci_id), rule.required);
      expected = riskmodel::chain_residual_rate(*chain, at_rule).rate;
    } else {
      expected = riskmodel::quantify(linked, live).rate;
    }
    e.mapping.push_back(RuleMapping{rule_id, expected});
  }
  for (const auto& kri : e.kris) {
    const bool mapped = std::any_of(e.mapping.begin(), e.mapping.end(), [&](const RuleMapping& m) {
      return s.rules.at(m.rule_id).kri_id == kri;
    });
    if (!mapped) throw Error(ErrorCode::MissingField, "mapping (no rule for KRI " + kri + ")");
  }

  const RiskLevels levels = entry_levels(s, e, live);
  if (levels.residual.rate > levels.inherent.rate) {
    throw Error(ErrorCode::ResidualExceedsInherent,
                e.risk_id + ": residual " + canonical_dump(Json(levels.residual.rate)) +
                    " > inherent " + canonical_dump(Json(levels.inherent.rate)));
  }
  e.inherent_risk = levels.inherent;
  e.residual_risk = levels.residual;

  if (!model.domain.empty()) {
    if (auto d = s.universe.domains.find(model.domain); d != s.universe.domains.end()) {
      auto& links = d->second.linked_models;
      if (std::find(links.begin(), links.end(), e.model_id) == links.end()) {
        identification::link_model(s.universe, model.domain, e.model_id);
      }
    }
  }

  const bool existed = s.entries.count(e.risk_id) > 0;
  audit.push_back({AuditKind::Edit, actor,
                   Json{{"op", existed ? "update_entry" : "create_entry"},
                        {"risk_id", e.risk_id},
                        {"inherent_rate", e.inherent_risk.rate},
                        {"residual_rate", e.residual_risk.rate}}});
  auto& slot = s.entries[e.risk_id];
  slot = std::move(e);
  return slot;
}

void recompute_entries(Snapshot& s, const Settings& settings, Timestamp now) {
  if (s.entries.empty()) return;
  const IndicatorContext live = live_context(s, settings.enhancement_margin, now);
  for (auto& [id, e] : s.entries) {
    refresh_mitigations(s, e, now);
    const RiskLevels levels = entry_levels(s, e, live);
    e.inherent_risk = levels.inherent;
    e.residual_risk = levels.residual;
  }
}

std::vector<std::string> completeness_gaps(const Snapshot& s) {
  std::vector<std::string> out;
  for (const auto& [id, d] : s.universe.domains) {
    if (d.status != identification::DomainStatus::InScope) continue;
    const bool has_entry = std::any_of(s.entries.begin(), s.entries.end(), [&](const auto& kv) {
      auto m = s.models.find(kv.second.model_id);
      return m != s.models.end() && m->second.domain == id;
    });
    if (!has_entry && s.universe.open_actions_for(id).empty()) out.push_back(id);
  }
  return out;
}

std::map<std::string, QuantifiedRisk> domain_residuals(const Snapshot& s) {
  std::map<std::string, RiskLevels> levels;
  for (const auto& [id, e] : s.entries) levels[id] = {e.inherent_risk, e.residual_risk};
  return residuals_by_domain(s, levels);
}

bool release_hold_if_clear(Snapshot& s) {
  if (!s.lifecycle.hold || hold_conditions_present(s)) return false;
  s.lifecycle.hold = false;
  s.lifecycle.hold_reason.clear();
  return true;
}

RuleOutcome apply_rules(Snapshot& s, const Settings& settings, Timestamp now, AuditBuffer& audit,
                        const std::string& actor) {
  RuleOutcome out;
  const auto rules = s.rule_list();
  auto eval = indicators::evaluate_rules(s.catalog, rules, s.measurements,
                                         settings.enhancement_margin, window_at(s, now));
  std::set<std::string> sources;
  for (const auto& r : rules) sources.insert(r.id);

  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& rule = rules[i];
    const RuleStatus& st = eval.statuses[i];
    auto active = std::find_if(s.breaches.begin(), s.breaches.end(), [&](const BreachRecord& b) {
      return b.rule_id == rule.id && !b.cleared_at;
    });
    if (st.state == RuleState::Breached && active == s.breaches.end()) {
      governance::Tier tier = governance::Tier::High;
      try {
        tier = governance::parse_tier(rule.escalation_severity);
      } catch (const Error&) {
      }
      auto esc = governance::escalate(numbered("E", s.next_escalation++), rule.id, tier, now,
                                      settings.governance.tiers, sources);
      BreachRecord b;
      b.id = numbered("B", s.next_breach++);
      b.rule_id = rule.id;
      b.triggered_at = now;
      b.kri_value = st.kri_value;
      b.kci_observed = st.kci_observed;
      b.escalation_id = esc.id;
      b.actions = {"development hold", "escalation " + esc.id + " raised"};
      audit.push_back({AuditKind::Escalation, actor,
                       Json{{"escalation", encode(esc)}, {"breach", b.id}, {"rule_id", rule.id}}});
      out.new_escalations.push_back(esc.id);
      out.new_breaches.push_back(b.id);
      s.escalations.push_back(std::move(esc));
      s.breaches.push_back(std::move(b));
      s.lifecycle.hold = true;
      s.lifecycle.hold_reason = "rule " + rule.id + " breached";
    } else if (st.state != RuleState::Breached && active != s.breaches.end()) {
      active->cleared_at = now;
      active->actions.push_back("rule no longer breached");
    }
    s.rule_statuses[rule.id] = st;
  }
  release_hold_if_clear(s);
  audit.push_back({AuditKind::RuleEval, actor, Json{{"statuses", encode_statuses(eval.statuses)}}});
  recompute_entries(s, settings, now);
  out.statuses = std::move(eval.statuses);
  return out;
}

RuleOutcome record_measurements(Snapshot& s, const std::vector<Measurement>& batch,
                                const Settings& settings, Timestamp now, AuditBuffer& audit,
                                const std::string& actor) {
  if (batch.empty()) throw Error(ErrorCode::InvalidArgument, "no measurements given");
  for (const auto& m : batch) {
    s.catalog.validate_measurement(m);
    if (m.timestamp > now) {
      throw Error(ErrorCode::InvalidArgument,
                  "measurement of " + m.indicator_id + " is dated after " + format_timestamp(now));
    }
    if (m.elicitation.effort_tier < 1 || m.elicitation.effort_tier > 3) {
      throw Error(ErrorCode::InvalidArgument, "effort_tier must be 1, 2 or 3");
    }
    s.measurements.push_back(m);
    if (s.catalog.kris.count(m.indicator_id) > 0 && m.effective_compute) {
      s.schedule.record(m.indicator_id, *m.effective_compute, m.timestamp);
      s.lifecycle.effective_compute = std::max(s.lifecycle.effective_compute, *m.effective_compute);
    }
    audit.push_back({AuditKind::Measurement, actor, encode(m)});
  }
  return apply_rules(s, settings, now, audit, actor);
}

const governance::EscalationEvent& resolve_escalation(
    Snapshot& s, const std::string& escalation_id, const std::string& decision,
    const std::vector<governance::Approval>& approvals, const Settings& settings, Timestamp now,
    AuditBuffer& audit, const std::string& actor) {
  auto* e = s.find_escalation(escalation_id);
  if (e == nullptr) throw Error(ErrorCode::NotFound, "escalation " + escalation_id);
  if (decision.empty()) throw Error(ErrorCode::InvalidArgument, "resolution needs a decision");
  const auto outcome =
      governance::require_approval(governance::ActionKind::EscalationResolution,
                                   settings.governance.policy, approvals, settings.governance.roles);
  if (!outcome.allowed) throw Error(ErrorCode::UnauthorizedRole, outcome.reason);
  governance::resolve(*e, governance::Resolution{outcome.approved_by.front(), now, decision});
  for (auto& b : s.breaches) {
    if (b.escalation_id == escalation_id) b.actions.push_back("escalation resolved: " + decision);
  }
  audit.push_back({AuditKind::Approval, actor,
                   Json{{"action", "escalation_resolution"},
                        {"escalation_id", escalation_id},
                        {"approved_by", outcome.approved_by}}});
  const bool released = release_hold_if_clear(s);
  audit.push_back({AuditKind::Escalation, actor,
                   Json{{"escalation", encode(*e)}, {"hold_released", released}}});
  return *e;
}

WhatIfResult what_if(const Snapshot& s, const WhatIf& overrides, const Settings& settings,
                     Timestamp now) {
  for (const auto& [id, v] : overrides.kri_values) {
    const auto& kri = s.catalog.kri(id);
    if (!(v >= kri.scale.lo && v <= kri.scale.hi)) {
      throw Error(ErrorCode::InvalidIndicator, id + " override outside its scale");
    }
  }
  std::map<std::string, std::string> kci_levels = overrides.kci_levels;
  for (const auto& [id, v] : overrides.kci_values) {
    const Kci& kci = s.catalog.kci(id);
    if (kci.metric.kind != KciMetric::Kind::Continuous) {
      throw Error(ErrorCode::InvalidIndicator, id + " takes a level, not a value");
    }
    kci_levels[id] = std::string(v <= kci.metric.bound ? indicators::kMeetsLevel
                                                       : indicators::kFailsLevel);
  }
  for (const auto& [id, level] : kci_levels) s.catalog.kci(id).level_index(level);

  IndicatorContext live = live_context(s, settings.enhancement_margin, now);
  for (const auto& [id, v] : overrides.kri_values) live.kri_values[id] = v;
  for (const auto& [id, level] : kci_levels) live.kci_levels[id] = level;

  WhatIfResult out;
  for (const auto& [id, entry] : s.entries) {
    RegisterEntry e = entry;
    refresh_mitigations(s, e, now);
    for (auto& status : e.kcis) {
      if (auto it = kci_levels.find(status.kci_id); it != kci_levels.end()) {
        status.level = it->second;
        status.operational = true;
      }
    }
    out.entries[id] = entry_levels(s, e, live);
  }

  const auto window = window_at(s, now);
  for (const auto& [id, rule] : s.rules) {
    const auto& kri = s.catalog.kri(rule.kri_id);
    const Kci& kci = s.catalog.kci(rule.kci_id);
    RuleStatus st;
    st.rule_id = id;
    st.evaluated_at = now;
    if (auto it = overrides.kri_values.find(rule.kri_id); it != overrides.kri_values.end()) {
      st.kri_value = it->second;
    } else {
      try {
        st.kri_value = indicators::effective_kri_value(kri, s.measurements,
                                                       settings.enhancement_margin, window);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoMeasurements) throw;
      }
    }
    st.kri_triggered = st.kri_value && *st.kri_value >= rule.kri_threshold;

    auto vo = overrides.kci_values.find(rule.kci_id);
    auto lo = kci_levels.find(rule.kci_id);
    if (vo != overrides.kci_values.end()) {
      st.kci_observed = canonical_dump(Json(vo->second));
      st.kci_met = std::holds_alternative<double>(rule.required)
                       ? vo->second <= std::get<double>(rule.required)
                       : lo->second == indicators::kMeetsLevel;
    } else if (lo != kci_levels.end()) {
      st.kci_observed = lo->second;
      if (const auto* req = std::get_if<std::string>(&rule.required)) {
        st.kci_met = kci.level_index(lo->second) >= kci.level_index(*req);
      } else {
        st.kci_met = lo->second == indicators::kMeetsLevel;
      }
    } else if (const Measurement* m = latest_of(s.measurements, kci.id, now)) {
      st.kci_observed = m->level ? *m->level : canonical_dump(Json(m->value));
      st.kci_met = indicators::requirement_met(kci, rule.required, s.measurements, now);
    } else if (st.kri_triggered) {
      throw Error(ErrorCode::MissingKciMeasurement, id + " needs a measurement of " + kci.id);
    }

    if (!st.kri_triggered) {
      st.state = RuleState::NotTriggered;
    } else if (st.kci_met) {
      st.state = RuleState::Satisfied;
    } else {
      st.state = RuleState::Breached;
      st.required_action = "hold";
    }
    out.statuses.push_back(std::move(st));
  }

  if (s.budget) {
    const auto residuals = residuals_by_domain(s, out.entries);
    const bool covered = std::all_of(s.budget->allocations.begin(), s.budget->allocations.end(),
                                     [&](const auto& kv) { return residuals.count(kv.first) > 0; });
    if (covered) out.compliance = tolerance::check_compliance(*s.budget, residuals);
  }
  return out;
}

}  // namespace frm::registry
