#include "frm/register/disclosure.hpp"

#include "frm/common/error.hpp"
#include "frm/register/codec.hpp"
#include "frm/register/operations.hpp"

namespace frm::registry {
namespace {

bool in_period(Timestamp t, const Period& p) { return t >= p.from && t < p.to; }

bool overlaps(const BreachRecord& b, const Period& p) {
  return b.triggered_at < p.to && (!b.cleared_at || *b.cleared_at >= p.from);
}

Json risk_body(const Period& period, const Snapshot& s) {
  const auto residuals = domain_residuals(s);
  std::map<std::string, int> breach_counts;
  for (const auto& b : s.breaches) {
    if (!overlaps(b, period)) continue;
    auto rule = s.rules.find(b.rule_id);
    if (rule != s.rules.end()) ++breach_counts[rule->second.tolerance_ref];
  }
  std::set<std::string> domains;
  for (const auto& [d, r] : residuals) domains.insert(d);
  if (s.budget) {
    for (const auto& [d, a] : s.budget->allocations) domains.insert(d);
  }
  for (const auto& [d, n] : breach_counts) domains.insert(d);

  Json rows = Json::array();
  double aggregate = 0.0;
  for (const auto& d : domains) {
    Json row{{"domain", d}, {"breaches", breach_counts.count(d) ? breach_counts.at(d) : 0}};
    auto r = residuals.find(d);
    if (r != residuals.end()) {
      row["residual_rate"] = r->second.rate;
      aggregate += r->second.rate;
    }
    if (s.budget) {
      auto a = s.budget->allocations.find(d);
      const double allocated = a == s.budget->allocations.end() ? 0.0 : a->second;
      row["allocated_rate"] = allocated;
      if (r != residuals.end()) row["within_allocation"] = r->second.rate <= allocated;
    }
    rows.push_back(row);
  }
  Json entries = Json::array();
  for (const auto& [id, e] : s.entries) {
    entries.push_back(Json{{"risk_id", id},
                           {"model_id", e.model_id},
                           {"risk_owner", e.risk_owner},
                           {"inherent_rate", e.inherent_risk.rate},
                           {"residual_rate", e.residual_risk.rate}});
  }
  Json body{{"domains", rows}, {"entries", entries}, {"aggregate_residual_rate", aggregate},
            {"assumptions", Json::array({"residual rates add across risk models and domains"})}};
  if (s.budget) body["total_tolerance"] = encode(s.budget->total);
  return body;
}

Json governance_body(const Period& period, const Snapshot& s,
                     const governance::GovernanceConfig& g) {
  Json roles = Json::array();
  for (const auto& r : g.roles) roles.push_back(encode(r));
  Json violations = Json::array();
  for (const auto& v : governance::check_separation(g.roles)) {
    violations.push_back(Json{{"rule", v.rule}, {"person", v.person}, {"detail", v.detail}});
  }
  int raised = 0, resolved = 0;
  for (const auto& e : s.escalations) {
    if (in_period(e.raised_at, period)) ++raised;
    if (e.resolution && in_period(e.resolution->at, period)) ++resolved;
  }
  Json transitions = Json::array();
  for (const auto& t : s.lifecycle.history) {
    if (!in_period(t.at, period)) continue;
    transitions.push_back(Json{{"from", lifecycle::to_string(t.from)},
                               {"to", lifecycle::to_string(t.to)},
                               {"at", format_timestamp(t.at)},
                               {"approved_by", t.approved_by}});
  }
  const Json cfg = encode(g);
  return Json{{"roles", roles},
              {"separation_checks", Json{{"pass", violations.empty()}, {"violations", violations}}},
              {"approval_policy", cfg.at("policies")},
              {"escalation_tiers", cfg.at("escalation_tiers")},
              {"escalations", Json{{"raised", raised}, {"resolved", resolved}}},
              {"gate_decisions", transitions},
              {"culture_checklist", g.culture_checklist}};
}

Json incident_body(const Period& period, const Snapshot& s) {
  Json incidents = Json::array();
  for (const auto& b : s.breaches) {
    if (!overlaps(b, period)) continue;
    Json rule = Json::object();
    if (auto r = s.rules.find(b.rule_id); r != s.rules.end()) rule = encode(r->second);
    Json timeline = Json::array();
    timeline.push_back(Json{{"at", format_timestamp(b.triggered_at)}, {"event", "rule breached"}});
    Json escalation = Json{{"id", b.escalation_id}, {"state", "open"}};
    if (const auto* e = s.find_escalation(b.escalation_id)) {
      escalation = encode(*e);
      timeline.push_back(Json{{"at", format_timestamp(e->raised_at)},
                              {"event", "escalation " + e->id + " raised"}});
      if (e->resolution) {
        timeline.push_back(Json{{"at", format_timestamp(e->resolution->at)},
                                {"event", "escalation resolved: " + e->resolution->decision}});
      }
    }
    if (b.cleared_at) {
      timeline.push_back(Json{{"at", format_timestamp(*b.cleared_at)}, {"event", "rule cleared"}});
    }
    std::stable_sort(timeline.begin(), timeline.end(), [](const Json& x, const Json& y) {
      return x.at("at").get<std::string>() < y.at("at").get<std::string>();
    });
    Json inc{{"breach_id", b.id},
             {"affected_rule", rule},
             {"triggered_at", format_timestamp(b.triggered_at)},
             {"escalation", escalation},
             {"timeline", timeline},
             {"actions_taken", b.actions},
             {"status", b.cleared_at ? "cleared" : "active"}};
    if (b.kri_value) inc["kri_value"] = *b.kri_value;
    if (b.kci_observed) inc["kci_observed"] = *b.kci_observed;
    incidents.push_back(inc);
  }
  return Json{{"incidents", incidents}, {"count", incidents.size()}};
}

}  // namespace

std::string_view to_string(DisclosureKind kind) {
  switch (kind) {
    case DisclosureKind::RiskDisclosure: return "risk_disclosure";
    case DisclosureKind::GovernanceDisclosure: return "governance_disclosure";
    case DisclosureKind::IncidentReport: return "incident_report";
  }
  return "risk_disclosure";
}

DisclosureKind parse_disclosure_kind(std::string_view name) {
  if (name == "risk_disclosure") return DisclosureKind::RiskDisclosure;
  if (name == "governance_disclosure") return DisclosureKind::GovernanceDisclosure;
  if (name == "incident_report") return DisclosureKind::IncidentReport;
  throw Error(ErrorCode::NotFound, "disclosure kind " + std::string(name));
}

Json Disclosure::to_json() const {
  return Json{{"kind", to_string(kind)},
              {"period", Json{{"from", format_timestamp(period.from)},
                              {"to", format_timestamp(period.to)}}},
              {"body", body}};
}

Disclosure generate_disclosure(DisclosureKind kind, const Period& period, const Snapshot& s,
                               const governance::GovernanceConfig& governance) {
  if (!(period.to > period.from)) {
    throw Error(ErrorCode::EmptyPeriod,
                format_timestamp(period.from) + " .. " + format_timestamp(period.to));
  }
  Disclosure d{kind, period, Json::object()};
  switch (kind) {
    case DisclosureKind::RiskDisclosure: d.body = risk_body(period, s); break;
    case DisclosureKind::GovernanceDisclosure: d.body = governance_body(period, s, governance); break;
    case DisclosureKind::IncidentReport: d.body = incident_body(period, s); break;
  }
  return d;
}

}  // namespace frm::registry
