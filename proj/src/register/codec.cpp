#include "frm/register/codec.hpp"

#include "frm/common/error.hpp"
#include "frm/common/overloaded.hpp"

namespace frm::registry {
namespace {

using namespace riskmodel;
using identification::ActionItem;
using identification::Finding;
using identification::RiskDomainEntry;

void keep_extras(ExtraSink sink, const std::string& key, const ObjectReader& r) {
  if (sink == nullptr) return;
  Json rest = r.rest();
  if (!rest.empty()) (*sink)[key] = std::move(rest);
}

Json with_extras(Json out, const std::map<std::string, Json>& extras, const std::string& key) {
  if (auto it = extras.find(key); it != extras.end()) merge_extra(out, it->second);
  return out;
}

const Json& array_at(ObjectReader& r, std::string_view key) {
  const Json& v = r.at(key);
  if (!v.is_array()) schema_error(r.child_path(key), "expected array");
  return v;
}

const Json* opt_array(ObjectReader& r, std::string_view key) {
  const Json* v = r.find(key);
  if (v != nullptr && !v->is_array()) schema_error(r.child_path(key), "expected array");
  return v;
}

std::vector<double> num_list(ObjectReader& r, std::string_view key) {
  const Json& v = array_at(r, key);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) schema_error(r.index_path(key, i), "expected number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

template <class Fn>
void each(ObjectReader& r, std::string_view key, Fn&& fn) {
  const Json& arr = array_at(r, key);
  for (std::size_t i = 0; i < arr.size(); ++i) fn(arr[i], r.index_path(key, i), i);
}

template <class Fn>
void each_opt(ObjectReader& r, std::string_view key, Fn&& fn) {
  if (const Json* arr = opt_array(r, key)) {
    for (std::size_t i = 0; i < arr->size(); ++i) fn((*arr)[i], r.index_path(key, i), i);
  }
}

template <class T, class Fn>
T parse_enum(ObjectReader& r, std::string_view key, Fn&& parse) {
  const std::string text = r.str(key);
  try {
    return parse(text);
  } catch (const Error&) {
    schema_error(r.child_path(key), "unknown value '" + text + "'");
  }
}

std::uint64_t unsigned_field(ObjectReader& r, std::string_view key) {
  const std::int64_t v = r.integer(key);
  if (v < 0) schema_error(r.child_path(key), "expected nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

// --- fault / event trees -------------------------------------------------

std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::And: return "and";
    case GateKind::Or: return "or";
    case GateKind::KOfN: return "k_of_n";
  }
  return "or";
}

GateKind parse_gate(std::string_view s) {
  if (s == "and") return GateKind::And;
  if (s == "or") return GateKind::Or;
  if (s == "k_of_n") return GateKind::KOfN;
  throw Error(ErrorCode::SchemaViolation, std::string(s));
}

Json encode_tree(const FaultTree& t) {
  Json gates = Json::object();
  for (const auto& [id, g] : t.gates) {
    Json gj{{"kind", gate_name(g.kind)}, {"children", g.children}};
    if (g.kind == GateKind::KOfN) gj["k"] = g.k;
    gates[id] = gj;
  }
  Json events = Json::array();
  for (const auto& [id, e] : t.basic_events) {
    Json ej{{"id", e.id}, {"description", e.description}};
    if (e.probability) ej["probability"] = *e.probability;
    if (e.rate) ej["rate"] = *e.rate;
    events.push_back(ej);
  }
  return Json{{"top", t.top}, {"gates", gates}, {"basic_events", events}};
}

FaultTree decode_tree(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  FaultTree t;
  t.top = r.str("top");
  const Json& gates = r.at("gates");
  if (!gates.is_object()) schema_error(r.child_path("gates"), "expected object");
  for (auto it = gates.begin(); it != gates.end(); ++it) {
    ObjectReader g(it.value(), r.child_path("gates") + "." + it.key());
    Gate gate;
    gate.kind = parse_enum<GateKind>(g, "kind", parse_gate);
    gate.children = g.str_list("children");
    if (gate.kind == GateKind::KOfN) gate.k = static_cast<int>(g.integer("k"));
    t.gates[it.key()] = gate;
  }
  each(r, "basic_events", [&](const Json& ej, const std::string& p, std::size_t) {
    ObjectReader e(ej, p);
    BasicEvent be;
    be.id = e.str("id");
    be.description = e.opt_str("description").value_or("");
    be.probability = e.opt_num("probability");
    be.rate = e.opt_num("rate");
    t.basic_events[be.id] = be;
  });
  return t;
}

Json encode_event_tree(const EventTree& t) {
  Json bps = Json::array();
  for (const auto& bp : t.branch_points) {
    bps.push_back(Json{{"description", bp.description},
                       {"outcomes", bp.outcomes},
                       {"probabilities", bp.probabilities}});
  }
  Json leaves = Json::array();
  for (const auto& leaf : t.leaves) {
    leaves.push_back(Json{{"path", leaf.path}, {"severity", encode(leaf.severity)}});
  }
  return Json{{"initiating_event",
               Json{{"description", t.initiating_description}, {"frequency", t.frequency}}},
              {"branch_points", bps},
              {"leaves", leaves}};
}

EventTree decode_event_tree(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  EventTree t;
  ObjectReader ie(r.at("initiating_event"), r.child_path("initiating_event"));
  t.initiating_description = ie.opt_str("description").value_or("");
  t.frequency = ie.num("frequency");
  each(r, "branch_points", [&](const Json& bj, const std::string& p, std::size_t) {
    ObjectReader b(bj, p);
    BranchPoint bp;
    bp.description = b.opt_str("description").value_or("");
    bp.outcomes = b.str_list("outcomes");
    bp.probabilities = num_list(b, "probabilities");
    t.branch_points.push_back(bp);
  });
  each(r, "leaves", [&](const Json& lj, const std::string& p, std::size_t) {
    ObjectReader l(lj, p);
    EventTreeLeaf leaf;
    const Json& path_json = array_at(l, "path");
    for (std::size_t i = 0; i < path_json.size(); ++i) {
      if (!path_json[i].is_number_unsigned()) {
        schema_error(l.index_path("path", i), "expected nonnegative integer");
      }
      leaf.path.push_back(path_json[i].get<std::size_t>());
    }
    leaf.severity = decode_severity(l.at("severity"), l.child_path("severity"));
    t.leaves.push_back(leaf);
  });
  return t;
}

// --- tables ---------------------------------------------------------------

Json encode_kri_table(const KriProbabilityTable& t) {
  Json out{{"id", t.id}, {"kri_id", t.kri_id}, {"edges", t.edges}, {"probabilities", t.probabilities}};
  if (!t.provenance.empty()) out["provenance"] = t.provenance;
  return out;
}

Json encode_kci_table(const KciProbabilityTable& t) {
  Json out{{"id", t.id}, {"kci_id", t.kci_id}, {"levels", t.levels}, {"probabilities", t.probabilities}};
  if (!t.provenance.empty()) out["provenance"] = t.provenance;
  return out;
}

// --- identification --------------------------------------------------------

RiskDomainEntry decode_domain(const Json& j, const std::string& path, ExtraSink extras) {
  ObjectReader r(j, path);
  RiskDomainEntry d;
  d.id = r.str("id");
  d.name = r.str("name");
  d.source = r.opt_str("source").value_or("");
  d.status = parse_enum<identification::DomainStatus>(r, "status", identification::parse_domain_status);
  d.exclusion_justification = r.opt_str("exclusion_justification").value_or("");
  d.linked_models = r.opt_str_list("linked_models");
  keep_extras(extras, "domains/" + d.id, r);
  return d;
}

Finding decode_finding(const Json& j, const std::string& path, ExtraSink extras) {
  ObjectReader r(j, path);
  Finding f;
  f.id = r.str("id");
  f.reporter = parse_enum<identification::Reporter>(r, "reporter", identification::parse_reporter);
  f.description = r.str("description");
  f.stage = parse_enum<identification::Stage>(r, "stage", identification::parse_stage);
  if (const Json* fb = r.find("fishbone")) {
    ObjectReader b(*fb, r.child_path("fishbone"));
    f.fishbone = identification::Fishbone{
        parse_enum<identification::FishboneCategory>(b, "category", identification::parse_fishbone),
        b.opt_str("cause_notes").value_or("")};
  }
  f.severity_estimate = parse_enum<governance::Tier>(r, "severity_estimate", governance::parse_tier);
  each_opt(r, "history", [&](const Json& hj, const std::string& p, std::size_t) {
    ObjectReader h(hj, p);
    f.history.push_back({parse_enum<identification::Stage>(h, "from", identification::parse_stage),
                         parse_enum<identification::Stage>(h, "to", identification::parse_stage),
                         h.time("at"), h.opt_str("notes").value_or("")});
  });
  f.annotations = r.opt_str_list("annotations");
  f.due = r.opt_time("due");
  f.dismissal_justification = r.opt_str("dismissal_justification").value_or("");
  f.promoted_model = r.opt_str("promoted_model");
  keep_extras(extras, "findings/" + f.id, r);
  return f;
}

Json encode_action(const ActionItem& a) {
  return Json{{"id", a.id},
              {"kind", a.kind},
              {"subject", a.subject},
              {"description", a.description},
              {"open", a.open}};
}

ActionItem decode_action(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  return ActionItem{r.str("id"), r.str("kind"), r.str("subject"),
                    r.opt_str("description").value_or(""), r.boolean("open")};
}

// --- register ---------------------------------------------------------------

RegisterEntry decode_entry(const Json& j, const std::string& path, ExtraSink extras) {
  ObjectReader r(j, path);
  RegisterEntry e;
  e.risk_id = r.str("risk_id");
  e.risk_owner = r.str("risk_owner");
  e.model_id = r.str("model_id");
  e.inherent_risk = decode_quantified(r.at("inherent_risk"), r.child_path("inherent_risk"));
  e.residual_risk = decode_quantified(r.at("residual_risk"), r.child_path("residual_risk"));
  e.kris = r.str_list("kris");
  each(r, "kcis", [&](const Json& kj, const std::string& p, std::size_t) {
    ObjectReader k(kj, p);
    e.kcis.push_back(MitigationStatus{k.str("kci_id"), k.str("level"), k.opt_num("value"),
                                      k.boolean("operational")});
  });
  each(r, "mapping", [&](const Json& mj, const std::string& p, std::size_t) {
    ObjectReader m(mj, p);
    e.mapping.push_back(RuleMapping{m.str("rule_id"), m.num("expected_residual")});
  });
  ObjectReader plan(r.at("action_plan"), r.child_path("action_plan"));
  each(plan, "actions", [&](const Json& aj, const std::string& p, std::size_t) {
    ObjectReader a(aj, p);
    e.action_plan.push_back(PlannedAction{a.str("what"), a.str("who"), a.time("due"),
                                          a.opt_str("resources").value_or("")});
  });
  keep_extras(extras, "entries/" + e.risk_id, r);
  return e;
}

governance::EscalationEvent decode_escalation(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  governance::EscalationEvent e;
  e.id = r.str("id");
  e.source = r.str("source");
  e.severity = parse_enum<governance::Tier>(r, "severity", governance::parse_tier);
  e.raised_at = r.time("raised_at");
  each(r, "notify", [&](const Json& nj, const std::string& p, std::size_t) {
    if (!nj.is_string()) schema_error(p, "expected string");
    try {
      e.notify.push_back(governance::parse_role_kind(nj.get<std::string>()));
    } catch (const Error&) {
      schema_error(p, "unknown role kind");
    }
  });
  e.deadline = r.time("deadline");
  if (const Json* res = r.find("resolution")) {
    ObjectReader rr(*res, r.child_path("resolution"));
    e.resolution = governance::Resolution{rr.str("by"), rr.time("at"), rr.str("decision")};
  }
  return e;
}

indicators::RuleStatus decode_status(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  indicators::RuleStatus s;
  s.rule_id = r.str("rule_id");
  s.kri_triggered = r.boolean("kri_triggered");
  s.kci_met = r.boolean("kci_met");
  s.state = parse_enum<indicators::RuleState>(r, "state", indicators::parse_rule_state);
  s.evaluated_at = r.time("evaluated_at");
  s.kri_value = r.opt_num("kri_value");
  s.kci_observed = r.opt_str("kci_observed");
  s.required_action = r.opt_str("required_action").value_or("");
  return s;
}

Json encode_breach(const BreachRecord& b) {
  Json out{{"id", b.id},
           {"rule_id", b.rule_id},
           {"triggered_at", format_timestamp(b.triggered_at)},
           {"escalation_id", b.escalation_id},
           {"actions", b.actions}};
  if (b.kri_value) out["kri_value"] = *b.kri_value;
  if (b.kci_observed) out["kci_observed"] = *b.kci_observed;
  if (b.cleared_at) out["cleared_at"] = format_timestamp(*b.cleared_at);
  return out;
}

BreachRecord decode_breach(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  BreachRecord b;
  b.id = r.str("id");
  b.rule_id = r.str("rule_id");
  b.triggered_at = r.time("triggered_at");
  b.escalation_id = r.str("escalation_id");
  b.actions = r.opt_str_list("actions");
  b.kri_value = r.opt_num("kri_value");
  b.kci_observed = r.opt_str("kci_observed");
  b.cleared_at = r.opt_time("cleared_at");
  return b;
}

lifecycle::LifecycleState decode_lifecycle(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  lifecycle::LifecycleState s;
  s.phase = parse_enum<lifecycle::Phase>(r, "phase", lifecycle::parse_phase);
  s.model_label = r.opt_str("model_label").value_or("");
  s.effective_compute = r.num("effective_compute");
  s.planned_compute = r.num("planned_compute");
  s.weights_changed_at = r.opt_time("weights_changed_at");
  s.hold = r.boolean("hold");
  s.hold_reason = r.opt_str("hold_reason").value_or("");
  each_opt(r, "history", [&](const Json& hj, const std::string& p, std::size_t) {
    ObjectReader h(hj, p);
    s.history.push_back({parse_enum<lifecycle::Phase>(h, "from", lifecycle::parse_phase),
                         parse_enum<lifecycle::Phase>(h, "to", lifecycle::parse_phase),
                         h.time("at"), h.opt_str_list("evidence"), h.opt_str_list("approved_by")});
  });
  return s;
}

}  // namespace

// --- riskmodel ----------------------------------------------------------------

Json encode(const Severity& s) {
  if (s.kind == Severity::Kind::Quantitative) {
    return Json{{"kind", "quantitative"}, {"magnitude", s.magnitude}, {"unit", s.unit}};
  }
  return Json{{"kind", "qualitative"}, {"scenario_label", s.scenario_label}};
}

Severity decode_severity(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string kind = r.str("kind");
  if (kind == "quantitative") return Severity::quantitative(r.num("magnitude"), r.str("unit"));
  if (kind == "qualitative") return Severity::qualitative(r.str("scenario_label"));
  schema_error(r.child_path("kind"), "expected quantitative or qualitative");
}

Json encode(const QuantifiedRisk& q) {
  Json out{{"rate", q.rate}, {"severity", encode(q.severity)}};
  if (q.ci95) out["ci95"] = Json::array({q.ci95->lo, q.ci95->hi});
  return out;
}

QuantifiedRisk decode_quantified(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  QuantifiedRisk q;
  q.rate = r.num("rate");
  q.severity = decode_severity(r.at("severity"), r.child_path("severity"));
  if (const Json* ci = r.find("ci95")) {
    if (!ci->is_array() || ci->size() != 2 || !(*ci)[0].is_number() || !(*ci)[1].is_number()) {
      schema_error(r.child_path("ci95"), "expected [lo, hi]");
    }
    q.ci95 = Interval{(*ci)[0].get<double>(), (*ci)[1].get<double>()};
  }
  return q;
}

Json encode(const RiskModel& m) {
  Json out = std::visit(
      overloaded{
          [](const ScenarioChain& c) {
            Json steps = Json::array();
            for (const auto& s : c.steps) {
              Json source = std::visit(
                  overloaded{
                      [](const FixedProbability& f) { return Json{{"fixed", f.value}}; },
                      [](const KriTableRef& t) { return Json{{"kri_table", t.table_id}}; },
                      [](const KciTableRef& t) { return Json{{"kci_table", t.table_id}}; },
                  },
                  s.source);
              steps.push_back(Json{{"id", s.id}, {"description", s.description}, {"source", source}});
            }
            return Json{{"kind", "scenario_chain"},
                        {"id", c.id},
                        {"description", c.description},
                        {"initiating_frequency", c.initiating_frequency},
                        {"steps", steps},
                        {"severity", encode(c.severity)}};
          },
          [](const FaultTreeModel& f) {
            return Json{{"kind", "fault_tree"},
                        {"id", f.id},
                        {"description", f.description},
                        {"demand_frequency", f.demand_frequency},
                        {"tree", encode_tree(f.tree)},
                        {"severity", encode(f.severity)}};
          },
          [](const EventTreeModel& e) {
            return Json{{"kind", "event_tree"},
                        {"id", e.id},
                        {"description", e.description},
                        {"tree", encode_event_tree(e.tree)},
                        {"severity", encode(e.severity)}};
          },
      },
      m.body);
  out["domain"] = m.domain;
  return out;
}

RiskModel decode_model(const Json& j, const std::string& path, ExtraSink extras) {
  ObjectReader r(j, path);
  RiskModel m;
  m.domain = r.opt_str("domain").value_or("");
  const std::string kind = r.str("kind");
  const std::string id = r.str("id");
  const std::string description = r.opt_str("description").value_or("");
  const Severity severity = decode_severity(r.at("severity"), r.child_path("severity"));
  if (kind == "scenario_chain") {
    ScenarioChain c;
    c.id = id;
    c.description = description;
    c.severity = severity;
    c.initiating_frequency = r.num("initiating_frequency");
    each(r, "steps", [&](const Json& sj, const std::string& p, std::size_t) {
      ObjectReader s(sj, p);
      ScenarioStep step;
      step.id = s.str("id");
      step.description = s.opt_str("description").value_or("");
      ObjectReader src(s.at("source"), s.child_path("source"));
      const int set = src.has("fixed") + src.has("kri_table") + src.has("kci_table");
      if (set != 1) schema_error(src.path(), "exactly one of fixed, kri_table, kci_table");
      if (src.has("fixed")) {
        step.source = FixedProbability{src.num("fixed")};
      } else if (src.has("kri_table")) {
        step.source = KriTableRef{src.str("kri_table")};
      } else {
        step.source = KciTableRef{src.str("kci_table")};
      }
      c.steps.push_back(step);
    });
    m.body = std::move(c);
  } else if (kind == "fault_tree") {
    FaultTreeModel f;
    f.id = id;
    f.description = description;
    f.severity = severity;
    f.demand_frequency = r.num("demand_frequency");
    f.tree = decode_tree(r.at("tree"), r.child_path("tree"));
    m.body = std::move(f);
  } else if (kind == "event_tree") {
    EventTreeModel e;
    e.id = id;
    e.description = description;
    e.severity = severity;
    e.tree = decode_event_tree(r.at("tree"), r.child_path("tree"));
    m.body = std::move(e);
  } else {
    schema_error(r.child_path("kind"), "expected scenario_chain, fault_tree or event_tree");
  }
  keep_extras(extras, "models/" + id, r);
  return m;
}

// --- tolerance --------------------------------------------------------------

Json encode(const tolerance::RiskTolerance& t) {
  Json out{{"max_rate", t.max_rate}, {"basis_note", t.basis_note}};
  if (t.form == tolerance::RiskTolerance::Form::Quantitative) {
    out["form"] = "quantitative";
    out["severity_floor"] = encode(t.severity_floor);
  } else {
    out["form"] = "scenario_bounded";
    out["scenario_label"] = t.scenario_label;
  }
  return out;
}

tolerance::RiskTolerance decode_tolerance(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  tolerance::RiskTolerance t;
  const std::string form = r.str("form");
  t.max_rate = r.num("max_rate");
  t.basis_note = r.opt_str("basis_note").value_or("");
  if (form == "quantitative") {
    t.form = tolerance::RiskTolerance::Form::Quantitative;
    t.severity_floor = decode_severity(r.at("severity_floor"), r.child_path("severity_floor"));
  } else if (form == "scenario_bounded") {
    t.form = tolerance::RiskTolerance::Form::ScenarioBounded;
    t.scenario_label = r.str("scenario_label");
  } else {
    schema_error(r.child_path("form"), "expected quantitative or scenario_bounded");
  }
  return t;
}

Json encode(const tolerance::BudgetLedger& l) {
  return Json{{"total", encode(l.total)}, {"allocations", l.allocations}, {"rationale", l.rationale}};
}

tolerance::BudgetLedger decode_ledger(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  tolerance::BudgetLedger l;
  l.total = decode_tolerance(r.at("total"), r.child_path("total"));
  const Json& alloc = r.at("allocations");
  if (!alloc.is_object()) schema_error(r.child_path("allocations"), "expected object");
  for (auto it = alloc.begin(); it != alloc.end(); ++it) {
    if (!it.value().is_number()) schema_error(r.child_path("allocations") + "." + it.key(), "expected number");
    l.allocations[it.key()] = it.value().get<double>();
  }
  if (const Json* rat = r.find("rationale")) {
    if (!rat->is_object()) schema_error(r.child_path("rationale"), "expected object");
    for (auto it = rat->begin(); it != rat->end(); ++it) {
      if (!it.value().is_string()) schema_error(r.child_path("rationale") + "." + it.key(), "expected string");
      l.rationale[it.key()] = it.value().get<std::string>();
    }
  }
  return l;
}

// --- indicators -------------------------------------------------------------

Json encode(const indicators::Kri& k) {
  Json tables = Json::array();
  for (const auto& t : k.tables) tables.push_back(encode_kri_table(t));
  return Json{{"id", k.id},
              {"name", k.name},
              {"kind", indicators::to_string(k.kind)},
              {"scale", Json{{"unit", k.scale.unit},
                             {"lo", k.scale.lo},
                             {"hi", k.scale.hi},
                             {"direction", "higher_is_riskier"}}},
              {"thresholds", k.thresholds},
              {"tables", tables}};
}

indicators::Kri decode_kri(const Json& j, const std::string& path, ExtraSink extras) {
  ObjectReader r(j, path);
  indicators::Kri k;
  k.id = r.str("id");
  k.name = r.opt_str("name").value_or(k.id);
  k.kind = parse_enum<indicators::KriKind>(r, "kind", indicators::parse_kri_kind);
  ObjectReader s(r.at("scale"), r.child_path("scale"));
  k.scale.unit = s.opt_str("unit").value_or("");
  k.scale.lo = s.num("lo");
  k.scale.hi = s.num("hi");
  if (auto dir = s.opt_str("direction"); dir && *dir != "higher_is_riskier") {
    schema_error(s.child_path("direction"), "KRI scales must be higher_is_riskier");
  }
  if (r.has("thresholds")) k.thresholds = num_list(r, "thresholds");
  each_opt(r, "tables", [&](const Json& tj, const std::string& p, std::size_t) {
    ObjectReader t(tj, p);
    KriProbabilityTable table;
    table.id = t.str("id");
    table.kri_id = t.opt_str("kri_id").value_or(k.id);
    table.edges = num_list(t, "edges");
    table.probabilities = num_list(t, "probabilities");
    table.provenance = t.opt_str("provenance").value_or("");
    k.tables.push_back(table);
  });
  keep_extras(extras, "kris/" + k.id, r);
  return k;
}

Json encode(const indicators::Kci& k) {
  Json metric;
  if (k.metric.kind == indicators::KciMetric::Kind::OrderedLevels) {
    metric = Json{{"kind", "ordered_levels"}, {"levels", k.metric.levels}};
  } else {
    metric = Json{{"kind", "continuous"},
                  {"unit", k.metric.unit},
                  {"bound", k.metric.bound},
                  {"direction", "lower_is_better"}};
  }
  Json tables = Json::array();
  for (const auto& t : k.tables) tables.push_back(encode_kci_table(t));
  return Json{{"id", k.id},
              {"name", k.name},
              {"mitigation_type", indicators::to_string(k.mitigation_type)},
              {"metric", metric},
              {"tables", tables}};
}

indicators::Kci decode_kci(const Json& j, const std::string& path, ExtraSink extras) {
  ObjectReader r(j, path);
  indicators::Kci k;
  k.id = r.str("id");
  k.name = r.opt_str("name").value_or(k.id);
  k.mitigation_type =
      parse_enum<indicators::MitigationType>(r, "mitigation_type", indicators::parse_mitigation_type);
  ObjectReader m(r.at("metric"), r.child_path("metric"));
  const std::string kind = m.str("kind");
  if (kind == "ordered_levels") {
    k.metric.kind = indicators::KciMetric::Kind::OrderedLevels;
    k.metric.levels = m.str_list("levels");
  } else if (kind == "continuous") {
    k.metric.kind = indicators::KciMetric::Kind::Continuous;
    k.metric.unit = m.opt_str("unit").value_or("");
    k.metric.bound = m.num("bound");
    if (auto dir = m.opt_str("direction"); dir && *dir != "lower_is_better") {
      schema_error(m.child_path("direction"), "continuous KCIs must be lower_is_better");
    }
  } else {
    schema_error(m.child_path("kind"), "expected ordered_levels or continuous");
  }
  each_opt(r, "tables", [&](const Json& tj, const std::string& p, std::size_t) {
    ObjectReader t(tj, p);
    KciProbabilityTable table;
    table.id = t.str("id");
    table.kci_id = t.opt_str("kci_id").value_or(k.id);
    table.levels = t.has("levels") ? t.str_list("levels") : k.metric.level_order();
    table.probabilities = num_list(t, "probabilities");
    table.provenance = t.opt_str("provenance").value_or("");
    k.tables.push_back(table);
  });
  keep_extras(extras, "kcis/" + k.id, r);
  return k;
}

Json encode(const indicators::IfThenRule& rule) {
  Json required = std::visit([](const auto& v) { return Json(v); }, rule.required);
  return Json{{"id", rule.id},
              {"kri_id", rule.kri_id},
              {"kri_threshold", rule.kri_threshold},
              {"kci_id", rule.kci_id},
              {"required", required},
              {"linked_model", rule.linked_model},
              {"tolerance_ref", rule.tolerance_ref},
              {"escalation_severity", rule.escalation_severity}};
}

indicators::IfThenRule decode_rule(const Json& j, const std::string& path, ExtraSink extras) {
  ObjectReader r(j, path);
  indicators::IfThenRule rule;
  rule.id = r.str("id");
  rule.kri_id = r.str("kri_id");
  rule.kri_threshold = r.num("kri_threshold");
  rule.kci_id = r.str("kci_id");
  const Json& req = r.at("required");
  if (req.is_string()) {
    rule.required = req.get<std::string>();
  } else if (req.is_number()) {
    rule.required = req.get<double>();
  } else {
    schema_error(r.child_path("required"), "expected level name or numeric bound");
  }
  rule.linked_model = r.str("linked_model");
  rule.tolerance_ref = r.str("tolerance_ref");
  rule.escalation_severity = r.opt_str("escalation_severity").value_or("high");
  keep_extras(extras, "rules/" + rule.id, r);
  return rule;
}

Json encode(const indicators::Measurement& m) {
  Json out{{"indicator_id", m.indicator_id},
           {"value", m.value},
           {"timestamp", format_timestamp(m.timestamp)},
           {"elicitation",
            Json{{"method_notes", m.elicitation.method_notes},
                 {"effort_tier", m.elicitation.effort_tier},
                 {"includes_posttraining_enhancements",
                  m.elicitation.includes_posttraining_enhancements}}}};
  if (m.level) out["level"] = *m.level;
  if (m.effective_compute) out["effective_compute"] = *m.effective_compute;
  return out;
}

indicators::Measurement decode_measurement(const Json& j, const std::string& path, ExtraSink extras,
                                           const std::string& key) {
  ObjectReader r(j, path);
  indicators::Measurement m;
  m.indicator_id = r.str("indicator_id");
  m.level = r.opt_str("level");
  m.value = m.level && !r.has("value") ? 0.0 : r.num("value");
  m.timestamp = r.time("timestamp");
  if (const Json* el = r.find("elicitation")) {
    ObjectReader e(*el, r.child_path("elicitation"));
    m.elicitation.method_notes = e.opt_str("method_notes").value_or("");
    m.elicitation.effort_tier = e.has("effort_tier") ? static_cast<int>(e.integer("effort_tier")) : 1;
    m.elicitation.includes_posttraining_enhancements =
        e.has("includes_posttraining_enhancements") && e.boolean("includes_posttraining_enhancements");
  }
  m.effective_compute = r.opt_num("effective_compute");
  if (!key.empty()) keep_extras(extras, key, r);
  return m;
}

Json encode(const indicators::RuleStatus& s) {
  Json out{{"rule_id", s.rule_id},
           {"kri_triggered", s.kri_triggered},
           {"kci_met", s.kci_met},
           {"state", indicators::to_string(s.state)},
           {"evaluated_at", format_timestamp(s.evaluated_at)}};
  if (s.kri_value) out["kri_value"] = *s.kri_value;
  if (s.kci_observed) out["kci_observed"] = *s.kci_observed;
  if (!s.required_action.empty()) out["required_action"] = s.required_action;
  return out;
}

// --- governance -------------------------------------------------------------

Json encode(const governance::Role& r) {
  return Json{{"id", r.id}, {"kind", governance::to_string(r.kind)}, {"person", r.person}};
}

governance::Role decode_role(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  governance::Role role;
  role.id = r.str("id");
  role.kind = parse_enum<governance::RoleKind>(r, "kind", governance::parse_role_kind);
  role.person = r.str("person");
  if (!r.rest().empty()) schema_error(path + "." + r.rest().begin().key(), "unknown key");
  return role;
}

Json encode(const governance::EscalationEvent& e) {
  Json notify = Json::array();
  for (auto k : e.notify) notify.push_back(governance::to_string(k));
  Json out{{"id", e.id},
           {"source", e.source},
           {"severity", governance::to_string(e.severity)},
           {"raised_at", format_timestamp(e.raised_at)},
           {"notify", notify},
           {"deadline", format_timestamp(e.deadline)},
           {"state", e.open() ? "open" : "resolved"}};
  if (e.resolution) {
    out["resolution"] = Json{{"by", e.resolution->by},
                             {"at", format_timestamp(e.resolution->at)},
                             {"decision", e.resolution->decision}};
  }
  return out;
}

Json encode(const governance::GovernanceConfig& g) {
  Json roles = Json::array();
  for (const auto& r : g.roles) roles.push_back(encode(r));
  Json policies = Json::object();
  for (const auto& [action, rule] : g.policy.rules) {
    Json req = Json::array(), forb = Json::array();
    for (auto k : rule.required) req.push_back(governance::to_string(k));
    for (auto k : rule.forbidden) forb.push_back(governance::to_string(k));
    policies[std::string(governance::to_string(action))] = Json{{"required", req}, {"forbidden", forb}};
  }
  return Json{{"roles", roles},
              {"policies", policies},
              {"escalation_tiers", Json{{"high_hours", g.tiers.high.count() / 3600},
                                        {"medium_hours", g.tiers.medium.count() / 3600},
                                        {"low_hours", g.tiers.low.count() / 3600}}},
              {"culture_checklist", g.culture_checklist}};
}

governance::GovernanceConfig decode_governance(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  governance::GovernanceConfig g;
  each_opt(r, "roles", [&](const Json& rj, const std::string& p, std::size_t) {
    g.roles.push_back(decode_role(rj, p));
  });
  if (const Json* pol = r.find("policies")) {
    if (!pol->is_object()) schema_error(r.child_path("policies"), "expected object");
    for (auto it = pol->begin(); it != pol->end(); ++it) {
      const std::string p = r.child_path("policies") + "." + it.key();
      governance::ActionKind action;
      try {
        action = governance::parse_action_kind(it.key());
      } catch (const Error&) {
        schema_error(p, "unknown action kind");
      }
      ObjectReader pr(it.value(), p);
      governance::ApprovalRule rule;
      const auto kinds = [&](std::string_view key) {
        std::vector<governance::RoleKind> out;
        const auto names = pr.opt_str_list(key);
        for (std::size_t i = 0; i < names.size(); ++i) {
          try {
            out.push_back(governance::parse_role_kind(names[i]));
          } catch (const Error&) {
            schema_error(pr.index_path(key, i), "unknown role kind");
          }
        }
        return out;
      };
      rule.required = kinds("required");
      rule.forbidden = kinds("forbidden");
      if (!pr.rest().empty()) schema_error(p + "." + pr.rest().begin().key(), "unknown key");
      g.policy.rules[action] = rule;
    }
  }
  if (const Json* tiers = r.find("escalation_tiers")) {
    ObjectReader t(*tiers, r.child_path("escalation_tiers"));
    const auto hours = [&](std::string_view key, std::chrono::seconds fallback) {
      if (!t.has(key)) return fallback;
      const double h = t.num(key);
      if (!(h > 0.0 && h <= 24.0 * 366)) schema_error(t.child_path(key), "must be in (0, 8784] hours");
      return std::chrono::seconds{static_cast<std::int64_t>(h * 3600)};
    };
    g.tiers.high = hours("high_hours", g.tiers.high);
    g.tiers.medium = hours("medium_hours", g.tiers.medium);
    g.tiers.low = hours("low_hours", g.tiers.low);
    if (!t.rest().empty()) schema_error(t.child_path(t.rest().begin().key()), "unknown key");
  }
  g.culture_checklist = r.opt_str_list("culture_checklist");
  if (!r.rest().empty()) schema_error(r.child_path(r.rest().begin().key()), "unknown key");
  try {
    g.policy.validate();
  } catch (const Error& e) {
    schema_error(r.child_path("policies"), e.detail());
  }
  return g;
}

// --- identification / register ------------------------------------------------

Json encode(const Finding& f) {
  Json history = Json::array();
  for (const auto& h : f.history) {
    history.push_back(Json{{"from", identification::to_string(h.from)},
                           {"to", identification::to_string(h.to)},
                           {"at", format_timestamp(h.at)},
                           {"notes", h.notes}});
  }
  Json out{{"id", f.id},
           {"reporter", identification::to_string(f.reporter)},
           {"description", f.description},
           {"stage", identification::to_string(f.stage)},
           {"severity_estimate", governance::to_string(f.severity_estimate)},
           {"history", history},
           {"annotations", f.annotations}};
  if (f.fishbone) {
    out["fishbone"] = Json{{"category", identification::to_string(f.fishbone->category)},
                           {"cause_notes", f.fishbone->cause_notes}};
  }
  if (f.due) out["due"] = format_timestamp(*f.due);
  if (!f.dismissal_justification.empty()) out["dismissal_justification"] = f.dismissal_justification;
  if (f.promoted_model) out["promoted_model"] = *f.promoted_model;
  return out;
}

Json encode(const RiskDomainEntry& d) {
  Json out{{"id", d.id},
           {"name", d.name},
           {"source", d.source},
           {"status", identification::to_string(d.status)},
           {"linked_models", d.linked_models}};
  if (!d.exclusion_justification.empty()) out["exclusion_justification"] = d.exclusion_justification;
  return out;
}

Json encode(const RegisterEntry& e) {
  Json kcis = Json::array();
  for (const auto& k : e.kcis) {
    Json kj{{"kci_id", k.kci_id}, {"level", k.level}, {"operational", k.operational}};
    if (k.value) kj["value"] = *k.value;
    kcis.push_back(kj);
  }
  Json mapping = Json::array();
  for (const auto& m : e.mapping) {
    mapping.push_back(Json{{"rule_id", m.rule_id}, {"expected_residual", m.expected_residual}});
  }
  Json actions = Json::array();
  for (const auto& a : e.action_plan) {
    actions.push_back(Json{{"what", a.what},
                           {"who", a.who},
                           {"due", format_timestamp(a.due)},
                           {"resources", a.resources}});
  }
  return Json{{"risk_id", e.risk_id},
              {"risk_owner", e.risk_owner},
              {"model_id", e.model_id},
              {"inherent_risk", encode(e.inherent_risk)},
              {"residual_risk", encode(e.residual_risk)},
              {"kris", e.kris},
              {"kcis", kcis},
              {"mapping", mapping},
              {"action_plan", Json{{"actions", actions}}}};
}

Json encode(const lifecycle::LifecycleState& s) {
  Json history = Json::array();
  for (const auto& h : s.history) {
    history.push_back(Json{{"from", lifecycle::to_string(h.from)},
                           {"to", lifecycle::to_string(h.to)},
                           {"at", format_timestamp(h.at)},
                           {"evidence", h.evidence},
                           {"approved_by", h.approved_by}});
  }
  Json out{{"phase", lifecycle::to_string(s.phase)},
           {"model_label", s.model_label},
           {"effective_compute", s.effective_compute},
           {"planned_compute", s.planned_compute},
           {"hold", s.hold},
           {"history", history}};
  if (s.weights_changed_at) out["weights_changed_at"] = format_timestamp(*s.weights_changed_at);
  if (!s.hold_reason.empty()) out["hold_reason"] = s.hold_reason;
  return out;
}

Json encode(const Snapshot& s) {
  const auto& x = s.extras;
  Json models = Json::array();
  for (const auto& [id, m] : s.models) models.push_back(with_extras(encode(m), x, "models/" + id));
  Json kris = Json::array();
  for (const auto& [id, k] : s.catalog.kris) kris.push_back(with_extras(encode(k), x, "kris/" + id));
  Json kcis = Json::array();
  for (const auto& [id, k] : s.catalog.kcis) kcis.push_back(with_extras(encode(k), x, "kcis/" + id));
  Json rules = Json::array();
  for (const auto& [id, r] : s.rules) rules.push_back(with_extras(encode(r), x, "rules/" + id));
  Json measurements = Json::array();
  for (std::size_t i = 0; i < s.measurements.size(); ++i) {
    measurements.push_back(
        with_extras(encode(s.measurements[i]), x, "measurements/" + std::to_string(i)));
  }
  Json domains = Json::array();
  for (const auto& [id, d] : s.universe.domains) {
    domains.push_back(with_extras(encode(d), x, "domains/" + id));
  }
  Json findings = Json::array();
  for (const auto& [id, f] : s.universe.findings) {
    findings.push_back(with_extras(encode(f), x, "findings/" + id));
  }
  Json actions = Json::array();
  for (const auto& [id, a] : s.universe.action_items) actions.push_back(encode_action(a));
  Json entries = Json::array();
  for (const auto& [id, e] : s.entries) entries.push_back(with_extras(encode(e), x, "entries/" + id));
  Json escalations = Json::array();
  for (const auto& e : s.escalations) escalations.push_back(encode(e));
  Json statuses = Json::array();
  for (const auto& [id, st] : s.rule_statuses) statuses.push_back(encode(st));
  Json breaches = Json::array();
  for (const auto& b : s.breaches) breaches.push_back(encode_breach(b));
  Json planned = Json::array();
  for (const auto& p : s.planned_mitigations) {
    planned.push_back(Json{{"kci_id", p.kci_id}, {"level", p.level}, {"description", p.description}});
  }
  Json redteam = Json::array();
  for (const auto& r : s.redteam_records) {
    redteam.push_back(Json{{"id", r.id},
                           {"model_label", r.model_label},
                           {"at", format_timestamp(r.at)},
                           {"summary", r.summary}});
  }
  Json last = Json::object();
  for (const auto& [id, le] : s.schedule.last_evaluated) {
    last[id] = Json{{"compute", le.compute}, {"date", format_timestamp(le.date)}};
  }

  Json out{{"format_version", s.format_version},
           {"models", models},
           {"kris", kris},
           {"kcis", kcis},
           {"rules", rules},
           {"measurements", measurements},
           {"domains", domains},
           {"findings", findings},
           {"action_items", actions},
           {"entries", entries},
           {"escalations", escalations},
           {"rule_statuses", statuses},
           {"breaches", breaches},
           {"lifecycle", encode(s.lifecycle)},
           {"planned_mitigations", planned},
           {"redteam_records", redteam},
           {"schedule", Json{{"compute_growth_factor", s.schedule.compute_growth_factor},
                             {"max_interval_days", s.schedule.max_interval_days},
                             {"last_evaluated", last}}},
           {"counters", Json{{"next_finding", s.universe.next_finding},
                             {"next_action", s.universe.next_action},
                             {"next_escalation", s.next_escalation},
                             {"next_breach", s.next_breach}}},
           {"audit", Json{{"count", s.audit_count}, {"head", s.audit_head}}}};
  if (s.budget) out["budget"] = encode(*s.budget);
  return with_extras(out, x, "$");
}

Snapshot decode_snapshot(const Json& j) {
  ObjectReader r(j, "");
  Snapshot s;
  ExtraSink extras = &s.extras;
  s.format_version = r.integer("format_version");
  if (s.format_version != kFormatVersion) {
    throw Error(ErrorCode::VersionMismatch, "register format " + std::to_string(s.format_version) +
                                                ", expected " + std::to_string(kFormatVersion));
  }
  if (const Json* b = r.find("budget")) s.budget = decode_ledger(*b, r.child_path("budget"));
  each(r, "models", [&](const Json& mj, const std::string& p, std::size_t) {
    auto m = decode_model(mj, p, extras);
    const std::string id = m.id();
    s.models.emplace(id, std::move(m));
  });
  each(r, "kris", [&](const Json& kj, const std::string& p, std::size_t) {
    auto k = decode_kri(kj, p, extras);
    s.catalog.kris.emplace(k.id, std::move(k));
  });
  each(r, "kcis", [&](const Json& kj, const std::string& p, std::size_t) {
    auto k = decode_kci(kj, p, extras);
    s.catalog.kcis.emplace(k.id, std::move(k));
  });
  each(r, "rules", [&](const Json& rj, const std::string& p, std::size_t) {
    auto rule = decode_rule(rj, p, extras);
    s.rules.emplace(rule.id, std::move(rule));
  });
  each(r, "measurements", [&](const Json& mj, const std::string& p, std::size_t i) {
    s.measurements.push_back(decode_measurement(mj, p, extras, "measurements/" + std::to_string(i)));
  });
  each(r, "domains", [&](const Json& dj, const std::string& p, std::size_t) {
    auto d = decode_domain(dj, p, extras);
    s.universe.domains.emplace(d.id, std::move(d));
  });
  each(r, "findings", [&](const Json& fj, const std::string& p, std::size_t) {
    auto f = decode_finding(fj, p, extras);
    s.universe.findings.emplace(f.id, std::move(f));
  });
  each(r, "action_items", [&](const Json& aj, const std::string& p, std::size_t) {
    auto a = decode_action(aj, p);
    s.universe.action_items.emplace(a.id, std::move(a));
  });
  each(r, "entries", [&](const Json& ej, const std::string& p, std::size_t) {
    auto e = decode_entry(ej, p, extras);
    s.entries.emplace(e.risk_id, std::move(e));
  });
  each(r, "escalations", [&](const Json& ej, const std::string& p, std::size_t) {
    s.escalations.push_back(decode_escalation(ej, p));
  });
  each(r, "rule_statuses", [&](const Json& sj, const std::string& p, std::size_t) {
    auto st = decode_status(sj, p);
    s.rule_statuses.emplace(st.rule_id, std::move(st));
  });
  each(r, "breaches", [&](const Json& bj, const std::string& p, std::size_t) {
    s.breaches.push_back(decode_breach(bj, p));
  });
  s.lifecycle = decode_lifecycle(r.at("lifecycle"), r.child_path("lifecycle"));
  each(r, "planned_mitigations", [&](const Json& pj, const std::string& p, std::size_t) {
    ObjectReader pm(pj, p);
    s.planned_mitigations.push_back(
        {pm.str("kci_id"), pm.str("level"), pm.opt_str("description").value_or("")});
  });
  each(r, "redteam_records", [&](const Json& rj, const std::string& p, std::size_t) {
    ObjectReader rr(rj, p);
    s.redteam_records.push_back(
        {rr.str("id"), rr.str("model_label"), rr.time("at"), rr.opt_str("summary").value_or("")});
  });
  ObjectReader sched(r.at("schedule"), r.child_path("schedule"));
  s.schedule.compute_growth_factor = sched.num("compute_growth_factor");
  s.schedule.max_interval_days = sched.num("max_interval_days");
  const Json& last = sched.at("last_evaluated");
  if (!last.is_object()) schema_error(sched.child_path("last_evaluated"), "expected object");
  for (auto it = last.begin(); it != last.end(); ++it) {
    ObjectReader le(it.value(), sched.child_path("last_evaluated") + "." + it.key());
    s.schedule.last_evaluated[it.key()] = {le.num("compute"), le.time("date")};
  }
  ObjectReader counters(r.at("counters"), r.child_path("counters"));
  s.universe.next_finding = unsigned_field(counters, "next_finding");
  s.universe.next_action = unsigned_field(counters, "next_action");
  s.next_escalation = unsigned_field(counters, "next_escalation");
  s.next_breach = unsigned_field(counters, "next_breach");
  ObjectReader audit(r.at("audit"), r.child_path("audit"));
  s.audit_count = unsigned_field(audit, "count");
  s.audit_head = audit.str("head");
  keep_extras(extras, "$", r);
  return s;
}

std::string export_register(const Snapshot& s) { return canonical_dump(encode(s)); }

Snapshot import_register(std::string_view document) {
  return decode_snapshot(canonical_parse(document));
}

}  // namespace frm::registry
