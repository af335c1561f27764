#include "frm/gateway/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "frm/common/error.hpp"
#include "frm/indicators/forecast.hpp"
#include "frm/indicators/solve.hpp"
#include "frm/lifecycle/gate.hpp"
#include "frm/register/codec.hpp"
#include "frm/register/disclosure.hpp"

namespace frm::gateway {
namespace {

using registry::Snapshot;

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = i;
    while (j < path.size() && path[j] != '/') ++j;
    if (j > i) out.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return out;
}

Json body_json(const Request& req) {
  if (req.body.find_first_not_of(" \t\r\n") == std::string::npos) return Json::object();
  Json j = canonical_parse(req.body);
  if (!j.is_object()) schema_error("$", "request body must be an object");
  return j;
}

std::string actor_of(const Json& body, const std::string& fallback = "api") {
  if (!body.contains("actor")) return fallback;
  if (!body.at("actor").is_string() || body.at("actor").get<std::string>().empty()) {
    schema_error(".actor", "expected nonempty string");
  }
  return body.at("actor").get<std::string>();
}

std::vector<governance::Approval> approvals_of(const Json& body) {
  std::vector<governance::Approval> out;
  if (!body.contains("approvals")) return out;
  const Json& arr = body.at("approvals");
  if (!arr.is_array()) schema_error(".approvals", "expected array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ObjectReader r(arr[i], ".approvals[" + std::to_string(i) + "]");
    out.push_back({r.str("role_id"), r.has("approve") ? r.boolean("approve") : true});
  }
  return out;
}

double query_num(const Request& req, const std::string& key) {
  auto it = req.query.find(key);
  if (it == req.query.end()) throw Error(ErrorCode::MissingField, "query parameter " + key);
  const std::string& text = it->second;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, key + " must be a number, got '" + text + "'");
  }
  return v;
}

std::optional<std::string> query_str(const Request& req, const std::string& key) {
  auto it = req.query.find(key);
  if (it == req.query.end()) return std::nullopt;
  return it->second;
}

std::string require_query(const Request& req, const std::string& key) {
  auto v = query_str(req, key);
  if (!v) throw Error(ErrorCode::MissingField, "query parameter " + key);
  return *v;
}

// Applies `fn` to every nonblank line of a line-delimited intake body.
template <class Fn>
void each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const Json j = canonical_parse(line);
      fn(j, "line " + std::to_string(line_no));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SchemaViolation) {
        throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_no) + " " + e.detail());
      }
      throw;
    }
  }
}

indicators::Measurement measurement_from(Json j, Timestamp now, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected object");
  if (!j.contains("timestamp")) j["timestamp"] = format_timestamp(now);
  j.erase("actor");
  return registry::decode_measurement(j, path);
}

identification::FindingIntake finding_from(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  identification::FindingIntake in;
  if (auto rep = r.opt_str("reporter")) {
    try {
      in.reporter = identification::parse_reporter(*rep);
    } catch (const Error&) {
      schema_error(r.child_path("reporter"), "expected internal, third_party or anonymous");
    }
  }
  in.description = r.str("description");
  if (auto sev = r.opt_str("severity_estimate")) {
    try {
      in.severity_estimate = governance::parse_tier(*sev);
    } catch (const Error&) {
      schema_error(r.child_path("severity_estimate"), "expected low, medium or high");
    }
  }
  in.due = r.opt_time("due");
  r.opt_str("actor");
  const Json rest = r.rest();
  if (!rest.empty()) schema_error(r.child_path(rest.begin().key()), "unknown key");
  return in;
}

Json encode_statuses(const std::vector<indicators::RuleStatus>& statuses) {
  Json out = Json::array();
  for (const auto& st : statuses) out.push_back(registry::encode(st));
  return out;
}

Json encode_compliance(const tolerance::ComplianceReport& c) {
  Json per = Json::object();
  for (const auto& [d, row] : c.per_domain) {
    per[d] = Json{{"allocated", row.allocated}, {"residual", row.residual}, {"pass", row.pass}};
  }
  return Json{{"pass", c.pass},
              {"aggregate_residual", c.aggregate_residual},
              {"per_domain", per},
              {"assumptions", c.assumptions}};
}

Json rule_outcome(const registry::RuleOutcome& o, const Snapshot& s) {
  return Json{{"statuses", encode_statuses(o.statuses)},
              {"escalations", o.new_escalations},
              {"breaches", o.new_breaches},
              {"hold", s.lifecycle.hold}};
}

const riskmodel::ScenarioChain& chain_model(const Snapshot& s, const std::string& id) {
  auto it = s.models.find(id);
  if (it == s.models.end()) throw Error(ErrorCode::NotFound, "model " + id);
  const auto* chain = it->second.chain();
  if (chain == nullptr) throw Error(ErrorCode::InvalidModel, id + " is not a scenario chain");
  return *chain;
}

const governance::Role& configured_role(const Config& c, const std::string& id) {
  const auto* role = c.governance.find_role(id);
  if (role == nullptr) throw Error(ErrorCode::NotFound, "role " + id);
  return *role;
}

void close_actions(identification::Universe& u, std::string_view kind, std::string_view subject) {
  for (auto& [id, a] : u.action_items) {
    if (a.open && a.kind == kind && a.subject == subject) a.open = false;
  }
}

std::string numbered(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%04zu", prefix, n);
  return buf;
}

Json error_body(const Error& e) {
  return Json{{"error", to_string(e.code())}, {"detail", e.detail()}};
}

}  // namespace

Timestamp system_now() {
  return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

Engine::Engine(Store store, Clock clock) : clock_(std::move(clock)) {
  LoadedStore loaded = store.load();
  config_ = std::move(loaded.config);
  settings_ = config_.settings();
  log_ = std::move(loaded.log);
  current_ = std::make_shared<const Snapshot>(std::move(loaded.snapshot));
  store_ = std::move(store);
}

Engine::Engine(Snapshot snapshot, Config config, Clock clock)
    : config_(std::move(config)), settings_(config_.settings()), clock_(std::move(clock)) {
  if (snapshot.audit_count != 0) {
    throw Error(ErrorCode::InvalidArgument, "a memory engine starts from an unaudited snapshot");
  }
  snapshot.audit_head = registry::to_hex(registry::kGenesisHash);
  current_ = std::make_shared<const Snapshot>(std::move(snapshot));
}

std::shared_ptr<const Snapshot> Engine::snapshot() const {
  std::lock_guard lock(publish_);
  return current_;
}

std::vector<registry::AuditEvent> Engine::audit_events() const {
  std::lock_guard lock(publish_);
  return log_.events();
}

Json Engine::mutate(const std::string& label, const std::string& actor, const Mutation& op) {
  std::lock_guard lock(writer_);
  Snapshot next = *snapshot();
  AuditBuffer records;
  const Timestamp now = clock_();
  Json result = op(next, records, now);

  Json rec = Json::array();
  for (const auto& r : records) {
    rec.push_back(Json{{"kind", to_string(r.kind)}, {"actor", r.actor}, {"body", r.body}});
  }
  const AuditKind kind = records.empty() ? AuditKind::Edit : records.front().kind;
  const Json body{{"request", label}, {"records", rec}};
  const registry::AuditEvent event = log_.next_event(actor, kind, body, now);
  next.audit_count = event.seq + 1;
  next.audit_head = registry::to_hex(event.hash);
  if (store_) store_->commit(next, event);
  {
    std::lock_guard publish(publish_);
    log_.append(actor, kind, body, now);
    current_ = std::make_shared<const Snapshot>(std::move(next));
  }
  if (result.is_object()) result["audit_seq"] = event.seq;
  return result;
}

Response Engine::handle(const Request& request) {
  try {
    return dispatch(request);
  } catch (const Error& e) {
    return Response{http_status(e.code()), error_body(e)};
  } catch (const Json::exception& e) {
    return Response{400, Json{{"error", "SchemaViolation"}, {"detail", e.what()}}};
  } catch (const std::exception& e) {
    return Response{500, Json{{"error", "Internal"}, {"detail", e.what()}}};
  }
}

Json verify_report(std::string_view log_bytes, std::optional<std::uint64_t> committed) {
  const auto decoded = registry::decode_log(log_bytes);
  const auto result = registry::verify_log_bytes(log_bytes);
  Json out{{"ok", result.ok}, {"events", decoded.events.size()}};
  if (!result.ok) {
    out["first_bad_seq"] = *result.first_bad_seq;
    out["reason"] = result.reason;
  } else if (committed && decoded.events.size() < *committed) {
    out["ok"] = false;
    out["first_bad_seq"] = decoded.events.size();
    out["reason"] = "log is missing events the register covers";
  }
  return out;
}

Response Engine::dispatch(const Request& req) {
  const auto seg = split_path(req.path);
  if (seg.empty() || seg[0] != "v1") throw Error(ErrorCode::NotFound, "no route " + req.path);
  const std::size_t n = seg.size() - 1;
  const auto at = [&](std::size_t i) -> const std::string& { return seg[i + 1]; };
  const bool get = req.method == "GET";
  const bool post = req.method == "POST";
  const std::string label = req.method + " " + req.path;
  const auto wrong_method = [&]() {
    return Response{405, Json{{"error", "MethodNotAllowed"}, {"detail", label}}};
  };
  const auto mutation = [&](const std::string& actor, const Mutation& op) {
    return Response{200, mutate(label, actor, op)};
  };
  const auto settings = settings_;

  if (n == 0) throw Error(ErrorCode::NotFound, "no route " + req.path);
  const std::string& root = at(0);

  // --- register -----------------------------------------------------------
  if (root == "register" && n == 1) {
    if (!get) return wrong_method();
    return Response{200, registry::encode(*snapshot())};
  }
  if (root == "risks" && n == 1) {
    if (get) {
      const auto s = snapshot();
      Json out = Json::array();
      for (const auto& [id, e] : s->entries) out.push_back(registry::encode(e));
      return Response{200, Json{{"entries", out}}};
    }
    if (!post) return wrong_method();
    const Json body = body_json(req);
    Json draft_json = body;
    draft_json.erase("actor");
    const auto draft = registry::decode_entry_draft(draft_json);
    return mutation(actor_of(body), [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
      return registry::encode(registry::upsert_entry(s, draft, settings, now, audit, actor_of(body)));
    });
  }
  if (root == "risks" && n == 2) {
    if (!get) return wrong_method();
    const auto s = snapshot();
    auto it = s->entries.find(at(1));
    if (it == s->entries.end()) throw Error(ErrorCode::NotFound, "risk " + at(1));
    return Response{200, registry::encode(it->second)};
  }

  // --- measurements and rules ---------------------------------------------
  if (root == "measurements" && (n == 1 || (n == 2 && at(1) == "intake"))) {
    if (!post) return wrong_method();
    const bool intake = n == 2;
    Json body = intake ? Json::object() : body_json(req);
    const std::string actor = intake ? query_str(req, "actor").value_or("api") : actor_of(body);
    return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
      std::vector<indicators::Measurement> batch;
      if (intake) {
        each_line(req.body, [&](const Json& j, const std::string& where) {
          batch.push_back(measurement_from(j, now, where));
        });
      } else if (body.contains("measurements")) {
        const Json& arr = body.at("measurements");
        if (!arr.is_array()) schema_error(".measurements", "expected array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
          batch.push_back(measurement_from(arr[i], now, ".measurements[" + std::to_string(i) + "]"));
        }
      } else {
        batch.push_back(measurement_from(body, now, ""));
      }
      const auto outcome = registry::record_measurements(s, batch, settings, now, audit, actor);
      Json out = rule_outcome(outcome, s);
      out["recorded"] = batch.size();
      return out;
    });
  }
  if (root == "measurements" && n == 1 && get) {
    return wrong_method();
  }
  if (root == "rules" && n == 1) {
    if (!get) return wrong_method();
    const auto s = snapshot();
    Json rules = Json::array();
    for (const auto& [id, r] : s->rules) rules.push_back(registry::encode(r));
    Json statuses = Json::array();
    for (const auto& [id, st] : s->rule_statuses) statuses.push_back(registry::encode(st));
    return Response{200, Json{{"rules", rules}, {"statuses", statuses}}};
  }
  if (root == "rules" && n == 2 && at(1) == "evaluate") {
    if (!post) return wrong_method();
    const Json body = body_json(req);
    const std::string actor = actor_of(body);
    return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
      return rule_outcome(registry::apply_rules(s, settings, now, audit, actor), s);
    });
  }
  if (root == "whatif" && n == 1) {
    if (!post) return wrong_method();
    const Json body_doc = body_json(req);
    ObjectReader r(body_doc, "");
    registry::WhatIf w;
    const auto read_map = [&](std::string_view key, auto& dest) {
      const Json* m = r.find(key);
      if (m == nullptr) return;
      if (!m->is_object()) schema_error(r.child_path(key), "expected object");
      for (auto it = m->begin(); it != m->end(); ++it) {
        using V = typename std::decay_t<decltype(dest)>::mapped_type;
        if constexpr (std::is_same_v<V, double>) {
          if (!it.value().is_number()) schema_error(r.child_path(key) + "." + it.key(), "expected number");
        } else {
          if (!it.value().is_string()) schema_error(r.child_path(key) + "." + it.key(), "expected string");
        }
        dest[it.key()] = it.value().template get<V>();
      }
    };
    read_map("kri_values", w.kri_values);
    read_map("kci_levels", w.kci_levels);
    read_map("kci_values", w.kci_values);
    r.opt_str("actor");
    if (!r.rest().empty()) schema_error(r.child_path(r.rest().begin().key()), "unknown key");
    const auto s = snapshot();
    const auto result = registry::what_if(*s, w, settings, clock_());
    Json entries = Json::array();
    for (const auto& [id, lv] : result.entries) {
      entries.push_back(Json{{"risk_id", id},
                             {"inherent_risk", registry::encode(lv.inherent)},
                             {"residual_risk", registry::encode(lv.residual)}});
    }
    Json out{{"entries", entries}, {"statuses", encode_statuses(result.statuses)}};
    if (result.compliance) out["compliance"] = encode_compliance(*result.compliance);
    return Response{200, out};
  }

  // --- findings -----------------------------------------------------------
  if (root == "findings" && n == 1) {
    if (get) {
      const auto s = snapshot();
      Json out = Json::array();
      for (const auto& [id, f] : s->universe.findings) out.push_back(registry::encode(f));
      return Response{200, Json{{"findings", out}}};
    }
    if (!post) return wrong_method();
    const Json body = body_json(req);
    const auto intake = finding_from(body, "");
    const std::string actor =
        intake.reporter == identification::Reporter::Anonymous ? "anonymous" : actor_of(body);
    return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
      return registry::encode(identification::report_finding(s.universe, intake, now, audit, actor));
    });
  }
  if (root == "findings" && n == 2 && at(1) == "intake") {
    if (!post) return wrong_method();
    std::vector<identification::FindingIntake> batch;
    each_line(req.body, [&](const Json& j, const std::string& where) {
      batch.push_back(finding_from(j, where));
    });
    if (batch.empty()) throw Error(ErrorCode::InvalidArgument, "no findings given");
    const bool any_anonymous = std::any_of(batch.begin(), batch.end(), [](const auto& in) {
      return in.reporter == identification::Reporter::Anonymous;
    });
    const std::string actor = any_anonymous ? "anonymous" : query_str(req, "actor").value_or("api");
    return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
      Json ids = Json::array();
      for (const auto& in : batch) {
        ids.push_back(identification::report_finding(s.universe, in, now, audit, actor).id);
      }
      return Json{{"findings", ids}};
    });
  }
  if (root == "findings" && n == 3) {
    if (!post) return wrong_method();
    const std::string id = at(1);
    const std::string op = at(2);
    const Json body_doc = body_json(req);
    ObjectReader r(body_doc, "");
    const std::string actor = r.opt_str("actor").value_or("api");
    if (op == "advance") {
      identification::Stage to;
      try {
        to = identification::parse_stage(r.str("to"));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::SchemaViolation || e.code() == ErrorCode::MissingField) throw;
        schema_error(".to", "unknown stage");
      }
      const std::string notes = r.opt_str("notes").value_or("");
      std::optional<identification::Fishbone> fishbone;
      if (const Json* fb = r.find("fishbone")) {
        ObjectReader b(*fb, ".fishbone");
        identification::Fishbone f;
        try {
          f.category = identification::parse_fishbone(b.str("category"));
        } catch (const Error& e) {
          if (e.code() == ErrorCode::SchemaViolation) throw;
          schema_error(".fishbone.category", "unknown category");
        }
        f.cause_notes = b.opt_str("cause_notes").value_or("");
        fishbone = f;
      }
      return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
        return registry::encode(
            identification::advance_finding(s.universe, id, to, notes, fishbone, now, audit, actor));
      });
    }
    if (op == "annotate") {
      const std::string note = r.str("note");
      return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp) {
        return registry::encode(identification::annotate_finding(s.universe, id, note, audit, actor));
      });
    }
    if (op == "edit") {
      const std::string description = r.str("description");
      return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp) {
        return registry::encode(identification::edit_finding(s.universe, id, description, audit, actor));
      });
    }
    if (op == "promote") {
      auto model = registry::decode_model(r.at("model"), ".model");
      return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp) {
        const auto& d = identification::promote_finding(s.universe, s.models, id, model, audit, actor);
        return Json{{"domain", registry::encode(d)}, {"finding", registry::encode(s.universe.findings.at(id))}};
      });
    }
    throw Error(ErrorCode::NotFound, "no route " + req.path);
  }

  // --- identification -----------------------------------------------------
  if (root == "domains" && n == 1) {
    if (!get) return wrong_method();
    const auto s = snapshot();
    Json out = Json::array();
    for (const auto& [id, d] : s->universe.domains) out.push_back(registry::encode(d));
    Json actions = Json::array();
    for (const auto& [id, a] : s->universe.action_items) {
      if (a.open) actions.push_back(Json{{"id", a.id}, {"kind", a.kind}, {"subject", a.subject}});
    }
    return Response{200, Json{{"domains", out}, {"open_actions", actions}}};
  }
  if (root == "domains" && n == 3 && at(2) == "exclude") {
    if (!post) return wrong_method();
    const Json body_doc = body_json(req);
    ObjectReader r(body_doc, "");
    const auto& role = configured_role(config_, r.str("role_id"));
    const std::string justification = r.opt_str("justification").value_or("");
    const std::string domain = at(1);
    return mutation(r.opt_str("actor").value_or(role.id), [&](Snapshot& s, AuditBuffer& audit, Timestamp) {
      return registry::encode(identification::exclude_risk(s.universe, domain, justification, role, audit));
    });
  }
  if (root == "import" && n == 1) {
    if (!post) return wrong_method();
    const Json body_doc = body_json(req);
    ObjectReader r(body_doc, "");
    const std::string actor = r.opt_str("actor").value_or("api");
    const auto approvals = approvals_of(body_doc);
    r.find("approvals");
    std::vector<identification::TaxonomyEntry> taxonomy;
    if (const Json* tx = r.find("taxonomy")) {
      if (!tx->is_array()) schema_error(".taxonomy", "expected array");
      for (std::size_t i = 0; i < tx->size(); ++i) {
        ObjectReader t((*tx)[i], ".taxonomy[" + std::to_string(i) + "]");
        taxonomy.push_back({t.str("name"), t.opt_str("source").value_or(""), t.opt_str("id").value_or("")});
      }
    }
    const auto list = [&](std::string_view key, auto decode) {
      std::vector<decltype(decode(Json(), std::string()))> out;
      if (const Json* arr = r.find(key)) {
        if (!arr->is_array()) schema_error(r.child_path(key), "expected array");
        for (std::size_t i = 0; i < arr->size(); ++i) {
          out.push_back(decode((*arr)[i], r.index_path(key, i)));
        }
      }
      return out;
    };
    const auto kris = list("kris", [](const Json& j, const std::string& p) { return registry::decode_kri(j, p); });
    const auto kcis = list("kcis", [](const Json& j, const std::string& p) { return registry::decode_kci(j, p); });
    const auto models = list("models", [](const Json& j, const std::string& p) { return registry::decode_model(j, p); });
    const auto rules = list("rules", [](const Json& j, const std::string& p) { return registry::decode_rule(j, p); });
    if (!r.rest().empty()) schema_error(r.child_path(r.rest().begin().key()), "unknown key");

    return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
      bool changes_thresholds = false;
      for (const auto& k : kris) {
        auto it = s.catalog.kris.find(k.id);
        if (it != s.catalog.kris.end() && it->second != k) changes_thresholds = true;
        s.catalog.kris[k.id] = k;
      }
      for (const auto& k : kcis) {
        auto it = s.catalog.kcis.find(k.id);
        if (it != s.catalog.kcis.end() && it->second != k) changes_thresholds = true;
        s.catalog.kcis[k.id] = k;
      }
      s.catalog.validate();
      if (!taxonomy.empty()) identification::import_taxonomy(s.universe, taxonomy, audit, actor);
      for (const auto& m : models) {
        m.validate();
        s.models[m.id()] = m;
        if (s.universe.domains.count(m.domain) > 0) identification::link_model(s.universe, m.domain, m.id());
      }
      for (const auto& m : models) {
        if (const auto* chain = m.chain()) riskmodel::chain_residual_rate(*chain, live_context(s, settings.enhancement_margin, now));
      }
      for (const auto& rule : rules) {
        s.catalog.validate_rule(rule);
        if (s.models.count(rule.linked_model) == 0) throw Error(ErrorCode::NotFound, "model " + rule.linked_model);
        auto it = s.rules.find(rule.id);
        if (it != s.rules.end() && it->second != rule) changes_thresholds = true;
        s.rules[rule.id] = rule;
        close_actions(s.universe, "define_indicators", rule.linked_model);
      }
      if (changes_thresholds) {
        const auto outcome = governance::require_approval(governance::ActionKind::ThresholdChange,
                                                          settings.governance.policy, approvals,
                                                          settings.governance.roles);
        if (!outcome.allowed) throw Error(ErrorCode::UnauthorizedRole, outcome.reason);
        audit.push_back({AuditKind::Approval, actor,
                         Json{{"action", "threshold_change"}, {"approved_by", Json(outcome.approved_by)}}});
      }
      const auto ids = [](const auto& items, auto id_of) {
        Json out = Json::array();
        for (const auto& x : items) out.push_back(id_of(x));
        return out;
      };
      Json summary{{"op", "import"},
                   {"domains", ids(taxonomy, [](const auto& t) { return t.id.empty() ? identification::slugify(t.name) : t.id; })},
                   {"kris", ids(kris, [](const auto& k) { return k.id; })},
                   {"kcis", ids(kcis, [](const auto& k) { return k.id; })},
                   {"models", ids(models, [](const auto& m) { return m.id(); })},
                   {"rules", ids(rules, [](const auto& x) { return x.id; })}};
      audit.push_back({AuditKind::Edit, actor, summary});
      if (!s.measurements.empty()) {
        const auto outcome = registry::apply_rules(s, settings, now, audit, actor);
        summary["statuses"] = encode_statuses(outcome.statuses);
        summary["escalations"] = outcome.new_escalations;
      }
      return summary;
    });
  }

  // --- tolerance ----------------------------------------------------------
  if (root == "budget" && n == 1) {
    if (get) {
      const auto s = snapshot();
      if (!s->budget) throw Error(ErrorCode::NotFound, "no risk budget defined");
      return Response{200, registry::encode(*s->budget)};
    }
    if (!post) return wrong_method();
    const Json body = body_json(req);
    const std::string actor = actor_of(body);
    const auto approvals = approvals_of(body);
    Json ledger_json = body;
    ledger_json.erase("actor");
    ledger_json.erase("approvals");
    if (!ledger_json.contains("rationale")) ledger_json["rationale"] = Json::object();
    const auto ledger = registry::decode_ledger(ledger_json, "");
    return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp) {
      auto next = tolerance::allocate_budget(ledger.total, ledger.allocations, ledger.rationale);
      if (s.budget) {
        const auto outcome = governance::require_approval(governance::ActionKind::BudgetReallocation,
                                                          settings.governance.policy, approvals,
                                                          settings.governance.roles);
        if (!outcome.allowed) throw Error(ErrorCode::UnauthorizedRole, outcome.reason);
        audit.push_back({AuditKind::Approval, actor,
                         Json{{"action", "budget_reallocation"}, {"approved_by", Json(outcome.approved_by)}}});
      }
      s.budget = next;
      audit.push_back({AuditKind::Edit, actor, Json{{"op", "set_budget"}, {"budget", registry::encode(next)}}});
      return registry::encode(next);
    });
  }
  if (root == "compliance" && n == 1) {
    if (!get) return wrong_method();
    const auto s = snapshot();
    if (!s->budget) throw Error(ErrorCode::NotFound, "no risk budget defined");
    return Response{200, encode_compliance(tolerance::check_compliance(*s->budget, registry::domain_residuals(*s)))};
  }
  if (root == "completeness" && n == 1) {
    if (!get) return wrong_method();
    return Response{200, Json{{"gaps", registry::completeness_gaps(*snapshot())}}};
  }

  // --- solving and forecasting --------------------------------------------
  if (root == "solve" && n == 2) {
    if (!get) return wrong_method();
    const auto s = snapshot();
    const auto& chain = chain_model(*s, require_query(req, "model"));
    const double tolerance = query_num(req, "tolerance");
    const auto ctx = registry::live_context(*s, settings.enhancement_margin, clock_());
    if (at(1) == "min-kci") {
      const auto sol = query_str(req, "kri")
                           ? indicators::solve_min_kci(chain, ctx, tolerance, query_num(req, "kri"))
                           : indicators::solve_min_kci(chain, ctx, tolerance);
      Json out{{"kci_id", sol.kci_id}, {"levels", sol.levels}, {"feasible", sol.level.has_value()}};
      out["level"] = sol.level ? Json(*sol.level) : Json(nullptr);
      if (sol.level) out["rate_at_level"] = sol.rate_at_level;
      return Response{200, out};
    }
    if (at(1) == "max-kri") {
      const std::string level = require_query(req, "level");
      std::string kri_id;
      for (const auto& t : riskmodel::kri_tables_of(chain)) {
        auto it = ctx.kri_tables.find(t);
        if (it != ctx.kri_tables.end()) kri_id = it->second.kri_id;
      }
      if (kri_id.empty()) throw Error(ErrorCode::InvalidArgument, "model has no KRI-driven step");
      const auto sol = indicators::solve_max_kri(chain, ctx, tolerance, level, s->catalog.kri(kri_id).scale.hi);
      Json out{{"kri_id", sol.kri_id}, {"admissible", sol.threshold.has_value()}};
      out["threshold"] = sol.threshold ? Json(*sol.threshold) : Json(nullptr);
      return Response{200, out};
    }
    throw Error(ErrorCode::NotFound, "no route " + req.path);
  }
  if (root == "forecast" && n == 1) {
    if (!get) return wrong_method();
    const auto s = snapshot();
    const std::string kri = require_query(req, "kri");
    const auto& k = s->catalog.kri(kri);
    const double threshold = query_num(req, "threshold");
    const auto f = indicators::forecast_crossing(indicators::capability_points(kri, s->measurements), threshold);
    Json out{{"kri_id", k.id},
             {"threshold", threshold},
             {"fit", Json{{"intercept", f.fit.intercept},
                          {"slope", f.fit.slope},
                          {"points_used", f.fit.points_used},
                          {"residual_rms", f.fit.residual_rms}}},
             {"already_reached", f.already_reached}};
    out["crossing_compute"] = f.crossing_compute ? Json(*f.crossing_compute) : Json(nullptr);
    out["within_planned_compute"] =
        f.crossing_compute.has_value() && *f.crossing_compute <= s->lifecycle.planned_compute;
    return Response{200, out};
  }
  if (root == "evaluations" && n == 2 && at(1) == "due") {
    if (!get) return wrong_method();
    const auto s = snapshot();
    std::map<std::string, double> compute;
    for (const auto& [id, k] : s->catalog.kris) compute[id] = s->lifecycle.effective_compute;
    return Response{200, Json{{"due", indicators::due_evaluations(s->schedule, clock_(), compute)}}};
  }

  // --- governance ---------------------------------------------------------
  if (root == "escalations" && n == 1) {
    if (!get) return wrong_method();
    const auto s = snapshot();
    Json out = Json::array();
    for (const auto& e : s->escalations) out.push_back(registry::encode(e));
    return Response{200, Json{{"escalations", out}, {"overdue", governance::overdue(s->escalations, clock_())}}};
  }
  if (root == "escalations" && n == 3 && at(2) == "resolve") {
    if (!post) return wrong_method();
    const Json body = body_json(req);
    const std::string actor = actor_of(body);
    const auto approvals = approvals_of(body);
    ObjectReader r(body, "");
    const std::string decision = r.str("decision");
    const std::string id = at(1);
    return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
      const auto& e = registry::resolve_escalation(s, id, decision, approvals, settings, now, audit, actor);
      Json out = registry::encode(e);
      out["hold"] = s.lifecycle.hold;
      return out;
    });
  }
  if (root == "governance" && n == 1) {
    if (!get) return wrong_method();
    Json out = registry::encode(config_.governance);
    Json violations = Json::array();
    for (const auto& v : governance::check_separation(config_.governance.roles)) {
      violations.push_back(Json{{"rule", v.rule}, {"person", v.person}, {"detail", v.detail}});
    }
    out["separation_violations"] = violations;
    return Response{200, out};
  }

  // --- lifecycle ----------------------------------------------------------
  if (root == "lifecycle" && n == 1) {
    if (get) return Response{200, registry::encode(snapshot()->lifecycle)};
    if (!post) return wrong_method();
    const Json body_doc = body_json(req);
    ObjectReader r(body_doc, "");
    const std::string actor = r.opt_str("actor").value_or("api");
    const auto label = r.opt_str("model_label");
    const auto planned = r.opt_num("planned_compute");
    const auto effective = r.opt_num("effective_compute");
    const auto weights = r.opt_time("weights_changed_at");
    if (!r.rest().empty()) schema_error(r.child_path(r.rest().begin().key()), "unknown key");
    return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
      auto& lc = s.lifecycle;
      if (label) lc.model_label = *label;
      if (planned) {
        if (!(*planned >= 0.0)) throw Error(ErrorCode::InvalidArgument, "planned_compute must be >= 0");
        lc.planned_compute = *planned;
      }
      if (effective) {
        if (!(*effective >= lc.effective_compute)) {
          throw Error(ErrorCode::InvalidArgument, "effective_compute may not decrease");
        }
        lc.effective_compute = *effective;
      }
      if (weights) lc.weights_changed_at = *weights;
      audit.push_back({AuditKind::Edit, actor, Json{{"op", "update_lifecycle"}, {"lifecycle", registry::encode(lc)}}});
      if (weights && !s.rules.empty() && !s.measurements.empty()) registry::apply_rules(s, settings, now, audit, actor);
      return registry::encode(lc);
    });
  }
  if (root == "planned-mitigations" && n == 1) {
    if (get) {
      Json out = Json::array();
      for (const auto& p : snapshot()->planned_mitigations) {
        out.push_back(Json{{"kci_id", p.kci_id}, {"level", p.level}, {"description", p.description}});
      }
      return Response{200, Json{{"planned_mitigations", out}}};
    }
    if (!post) return wrong_method();
    const Json body_doc = body_json(req);
    ObjectReader r(body_doc, "");
    const std::string actor = r.opt_str("actor").value_or("api");
    lifecycle::PlannedMitigation p{r.str("kci_id"), r.str("level"), r.opt_str("description").value_or("")};
    return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp) {
      s.catalog.kci(p.kci_id).level_index(p.level);
      s.planned_mitigations.push_back(p);
      Json out{{"kci_id", p.kci_id}, {"level", p.level}, {"description", p.description}};
      audit.push_back({AuditKind::Edit, actor, Json{{"op", "plan_mitigation"}, {"mitigation", out}}});
      return out;
    });
  }
  if (root == "redteam-records" && n == 1) {
    if (!post) return wrong_method();
    const Json body_doc = body_json(req);
    ObjectReader r(body_doc, "");
    const std::string actor = r.opt_str("actor").value_or("api");
    const std::string model_label = r.str("model_label");
    const std::string summary = r.opt_str("summary").value_or("");
    return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
      lifecycle::RedTeamRecord rec{numbered("RT", s.redteam_records.size() + 1), model_label, now, summary};
      s.redteam_records.push_back(rec);
      Json out{{"id", rec.id}, {"model_label", rec.model_label}, {"at", format_timestamp(now)}, {"summary", summary}};
      audit.push_back({AuditKind::Edit, actor, Json{{"op", "record_redteam"}, {"record", out}}});
      return out;
    });
  }
  if (root == "gates" && n == 3) {
    if (!post) return wrong_method();
    const auto target = lifecycle::parse_phase(at(1));
    const Json body = body_json(req);
    const auto approvals = approvals_of(body);
    if (at(2) == "evaluate") {
      const auto s = snapshot();
      return Response{200, lifecycle::evaluate_gate(*s, target, approvals, settings, clock_()).to_json()};
    }
    if (at(2) == "transition") {
      const std::string actor = actor_of(body);
      return mutation(actor, [&](Snapshot& s, AuditBuffer& audit, Timestamp now) {
        const auto decision = lifecycle::evaluate_gate(s, target, approvals, settings, now);
        lifecycle::transition(s, decision, now, audit, actor);
        Json out = decision.to_json();
        out["phase"] = lifecycle::to_string(s.lifecycle.phase);
        return out;
      });
    }
    throw Error(ErrorCode::NotFound, "no route " + req.path);
  }

  // --- transparency and audit ---------------------------------------------
  if (root == "disclosures" && n == 2) {
    if (!get) return wrong_method();
    const auto kind = registry::parse_disclosure_kind(at(1));
    const auto parse_or = [&](const std::string& key, Timestamp fallback) {
      auto v = query_str(req, key);
      if (!v) return fallback;
      try {
        return parse_timestamp(*v);
      } catch (const Error&) {
        throw Error(ErrorCode::InvalidArgument, key + " must be YYYY-MM-DDTHH:MM:SSZ");
      }
    };
    const registry::Period period{parse_or("from", from_unix(0)), parse_or("to", clock_() + std::chrono::seconds(1))};
    return Response{200, registry::generate_disclosure(kind, period, *snapshot(), config_.governance).to_json()};
  }
  if (root == "audit" && n == 1) {
    if (!get) return wrong_method();
    Json out = Json::array();
    for (const auto& e : audit_events()) {
      out.push_back(Json{{"seq", e.seq},
                         {"timestamp", format_timestamp(e.timestamp)},
                         {"actor", e.actor()},
                         {"kind", to_string(e.kind())},
                         {"body", e.body()},
                         {"prev_hash", registry::to_hex(e.prev_hash)},
                         {"hash", registry::to_hex(e.hash)}});
    }
    return Response{200, Json{{"events", out}}};
  }
  if (root == "audit" && n == 2 && at(1) == "verify") {
    if (!get) return wrong_method();
    const auto s = snapshot();
    if (store_) return Response{200, verify_report(read_file(store_->log_path()), s->audit_count)};
    std::string bytes;
    for (const auto& e : audit_events()) bytes += registry::encode_record(e);
    return Response{200, verify_report(bytes, s->audit_count)};
  }

  throw Error(ErrorCode::NotFound, "no route " + req.path);
}

}  // namespace frm::gateway
