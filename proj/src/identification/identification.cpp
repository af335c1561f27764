#include "frm/identification/identification.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

#include "frm/common/error.hpp"

namespace frm::identification {
namespace {

using governance::RoleKind;
using governance::Tier;

std::string numbered(const char* prefix, std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%04llu", prefix, static_cast<unsigned long long>(n));
  return buf;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

int rank(Stage s) {
  switch (s) {
    case Stage::Reported: return 0;
    case Stage::Triaged: return 1;
    case Stage::Investigating: return 2;
    case Stage::Confirmed: return 3;
    case Stage::Dismissed: return 4;
  }
  return 0;
}

Finding& find_finding(Universe& u, const std::string& id) {
  auto it = u.findings.find(id);
  if (it == u.findings.end()) throw Error(ErrorCode::NotFound, "finding " + id);
  return it->second;
}

ActionItem& open_action(Universe& u, std::string kind, std::string subject, std::string description) {
  for (auto& [id, item] : u.action_items) {
    if (item.open && item.kind == kind && item.subject == subject) return item;
  }
  const std::string id = numbered("A", u.next_action++);
  auto& item = u.action_items[id];
  item = ActionItem{id, std::move(kind), std::move(subject), std::move(description), true};
  return item;
}

void close_actions(Universe& u, std::string_view kind, std::string_view subject) {
  for (auto& [id, item] : u.action_items) {
    if (item.open && item.kind == kind && item.subject == subject) item.open = false;
  }
}

Json finding_summary(const Finding& f) {
  return Json{{"finding", f.id}, {"stage", to_string(f.stage)}};
}

}  // namespace

std::vector<const ActionItem*> Universe::open_actions_for(std::string_view subject) const {
  std::vector<const ActionItem*> out;
  for (const auto& [id, item] : action_items) {
    if (item.open && item.subject == subject) out.push_back(&item);
  }
  return out;
}

std::string slugify(std::string_view name) {
  std::string out;
  bool dash = false;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      if (dash && !out.empty()) out.push_back('-');
      out.push_back(static_cast<char>(std::tolower(c)));
      dash = false;
    } else {
      dash = true;
    }
  }
  return out;
}

std::vector<RiskDomainEntry> import_taxonomy(Universe& u, const std::vector<TaxonomyEntry>& entries,
                                             AuditBuffer& audit, const std::string& actor) {
  std::set<std::string> names;
  for (const auto& [id, d] : u.domains) names.insert(d.name);
  std::set<std::string> ids;
  for (const auto& e : entries) {
    const std::string id = e.id.empty() ? slugify(e.name) : e.id;
    if (e.name.empty() || id.empty()) throw Error(ErrorCode::InvalidArgument, "taxonomy entry without a name");
    if (!names.insert(e.name).second) throw Error(ErrorCode::DuplicateName, e.name);
    if (u.domains.count(id) != 0 || !ids.insert(id).second) throw Error(ErrorCode::DuplicateName, id);
  }

  std::vector<RiskDomainEntry> created;
  Json imported = Json::array();
  for (const auto& e : entries) {
    RiskDomainEntry d;
    d.id = e.id.empty() ? slugify(e.name) : e.id;
    d.name = e.name;
    d.source = e.source;
    open_action(u, "define_risk_model", d.id, "build a risk model for " + d.name);
    u.domains[d.id] = d;
    created.push_back(d);
    imported.push_back(d.id);
  }
  audit.push_back({AuditKind::Edit, actor, Json{{"op", "import_taxonomy"}, {"domains", imported}}});
  return created;
}

const RiskDomainEntry& exclude_risk(Universe& u, const std::string& domain_id,
                                    const std::string& justification,
                                    const governance::Role& approver, AuditBuffer& audit) {
  auto it = u.domains.find(domain_id);
  if (it == u.domains.end()) throw Error(ErrorCode::NotFound, "domain " + domain_id);
  if (blank(justification)) throw Error(ErrorCode::EmptyJustification, domain_id);
  if (approver.kind != RoleKind::RiskOwner && approver.kind != RoleKind::Cro) {
    throw Error(ErrorCode::UnauthorizedRole,
                std::string(governance::to_string(approver.kind)) + " may not exclude risks");
  }
  RiskDomainEntry& d = it->second;
  d.status = DomainStatus::Excluded;
  d.exclusion_justification = justification;
  audit.push_back({AuditKind::Exclusion, approver.id,
                   Json{{"domain", d.id}, {"justification", justification}}});
  return d;
}

const Finding& report_finding(Universe& u, const FindingIntake& intake, Timestamp now,
                              AuditBuffer& audit, const std::string& actor) {
  if (blank(intake.description)) throw Error(ErrorCode::InvalidArgument, "finding needs a description");
  Finding f;
  f.id = numbered("F", u.next_finding++);
  f.reporter = intake.reporter;
  f.description = intake.description;
  f.severity_estimate = intake.severity_estimate;
  f.due = intake.due;
  f.history.push_back({Stage::Reported, Stage::Reported, now, "reported"});
  auto& stored = u.findings[f.id] = std::move(f);
  // Anonymous reports never carry the actor into the audit trail.
  const std::string who = stored.reporter == Reporter::Anonymous ? "anonymous" : actor;
  audit.push_back({AuditKind::Edit, who,
                   Json{{"op", "report_finding"}, {"finding", stored.id},
                        {"severity", governance::to_string(stored.severity_estimate)}}});
  return stored;
}

const Finding& advance_finding(Universe& u, const std::string& finding_id, Stage to,
                               const std::string& notes, std::optional<Fishbone> fishbone,
                               Timestamp now, AuditBuffer& audit, const std::string& actor) {
  Finding& f = find_finding(u, finding_id);
  const bool closed = f.stage == Stage::Confirmed || f.stage == Stage::Dismissed;
  const bool legal = !closed && (to == Stage::Dismissed || rank(to) > rank(f.stage));
  if (!legal) {
    throw Error(ErrorCode::IllegalTransition, f.id + ": " + std::string(to_string(f.stage)) +
                                                  " -> " + std::string(to_string(to)));
  }
  if (to == Stage::Dismissed && blank(notes)) throw Error(ErrorCode::EmptyJustification, f.id);
  if (fishbone) f.fishbone = std::move(fishbone);
  if (to == Stage::Confirmed && !f.fishbone) {
    throw Error(ErrorCode::IllegalTransition, f.id + ": confirming needs a fishbone category");
  }
  f.history.push_back({f.stage, to, now, notes});
  f.stage = to;
  if (to == Stage::Dismissed) f.dismissal_justification = notes;
  if (to == Stage::Confirmed && f.severity_estimate == Tier::High && !f.promoted_model) {
    open_action(u, "risk_model_stub", f.id,
                "additional risk analysis for confirmed high-severity finding " + f.id);
  }
  audit.push_back({AuditKind::Edit, actor, finding_summary(f)});
  return f;
}

const Finding& edit_finding(Universe& u, const std::string& finding_id,
                            const std::string& description, AuditBuffer& audit,
                            const std::string& actor) {
  Finding& f = find_finding(u, finding_id);
  if (f.reporter == Reporter::ThirdParty) {
    throw Error(ErrorCode::UnauthorizedRole, f.id + ": third-party findings can only be annotated");
  }
  f.description = description;
  audit.push_back({AuditKind::Edit, actor, Json{{"op", "edit_finding"}, {"finding", f.id}}});
  return f;
}

const Finding& annotate_finding(Universe& u, const std::string& finding_id,
                                const std::string& note, AuditBuffer& audit,
                                const std::string& actor) {
  Finding& f = find_finding(u, finding_id);
  if (blank(note)) throw Error(ErrorCode::InvalidArgument, "empty annotation");
  f.annotations.push_back(note);
  audit.push_back({AuditKind::Edit, actor, Json{{"op", "annotate_finding"}, {"finding", f.id}}});
  return f;
}

void link_model(Universe& u, const std::string& domain_id, const std::string& model_id) {
  auto it = u.domains.find(domain_id);
  if (it == u.domains.end()) throw Error(ErrorCode::NotFound, "domain " + domain_id);
  auto& links = it->second.linked_models;
  if (std::find(links.begin(), links.end(), model_id) == links.end()) links.push_back(model_id);
  close_actions(u, "define_risk_model", domain_id);
}

const RiskDomainEntry& promote_finding(Universe& u, std::map<std::string, riskmodel::RiskModel>& models,
                                       const std::string& finding_id, riskmodel::RiskModel model,
                                       AuditBuffer& audit, const std::string& actor) {
  Finding& f = find_finding(u, finding_id);
  if (f.stage != Stage::Confirmed) throw Error(ErrorCode::NotConfirmed, f.id);
  model.validate();
  if (model.domain.empty()) model.domain = slugify(model.id());
  const std::string model_id = model.id();
  const std::string domain_id = model.domain;

  if (u.domains.count(domain_id) == 0) {
    RiskDomainEntry d;
    d.id = domain_id;
    d.name = domain_id;
    d.source = "red-team finding " + f.id;
    u.domains[domain_id] = d;
  }
  if (models.count(model_id) == 0) models.emplace(model_id, std::move(model));
  link_model(u, domain_id, model_id);
  f.promoted_model = model_id;
  close_actions(u, "risk_model_stub", f.id);
  open_action(u, "define_indicators", model_id, "define KRI/KCI rule pairs for " + model_id);
  audit.push_back({AuditKind::Edit, actor,
                   Json{{"op", "promote_finding"}, {"finding", f.id}, {"model", model_id},
                        {"domain", domain_id}}});
  return u.domains.at(domain_id);
}

std::string_view to_string(DomainStatus s) {
  return s == DomainStatus::InScope ? "in_scope" : "excluded";
}

DomainStatus parse_domain_status(std::string_view s) {
  if (s == "in_scope") return DomainStatus::InScope;
  if (s == "excluded") return DomainStatus::Excluded;
  throw Error(ErrorCode::SchemaViolation, "unknown domain status " + std::string(s));
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Reported: return "reported";
    case Stage::Triaged: return "triaged";
    case Stage::Investigating: return "investigating";
    case Stage::Confirmed: return "confirmed";
    case Stage::Dismissed: return "dismissed";
  }
  return "reported";
}

Stage parse_stage(std::string_view s) {
  for (auto st : {Stage::Reported, Stage::Triaged, Stage::Investigating, Stage::Confirmed,
                  Stage::Dismissed}) {
    if (to_string(st) == s) return st;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown stage " + std::string(s));
}

std::string_view to_string(Reporter r) {
  switch (r) {
    case Reporter::Internal: return "internal";
    case Reporter::ThirdParty: return "third_party";
    case Reporter::Anonymous: return "anonymous";
  }
  return "internal";
}

Reporter parse_reporter(std::string_view r) {
  for (auto x : {Reporter::Internal, Reporter::ThirdParty, Reporter::Anonymous}) {
    if (to_string(x) == r) return x;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown reporter " + std::string(r));
}

std::string_view to_string(FishboneCategory c) {
  switch (c) {
    case FishboneCategory::Model: return "model";
    case FishboneCategory::Data: return "data";
    case FishboneCategory::ToolingScaffolding: return "tooling_scaffolding";
    case FishboneCategory::UserBehavior: return "user_behavior";
    case FishboneCategory::DeploymentContext: return "deployment_context";
    case FishboneCategory::ExternalEnvironment: return "external_environment";
  }
  return "model";
}

FishboneCategory parse_fishbone(std::string_view c) {
  for (auto x : {FishboneCategory::Model, FishboneCategory::Data,
                 FishboneCategory::ToolingScaffolding, FishboneCategory::UserBehavior,
                 FishboneCategory::DeploymentContext, FishboneCategory::ExternalEnvironment}) {
    if (to_string(x) == c) return x;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fishbone category " + std::string(c));
}

}  // namespace frm::identification
