#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frm/common/audit_record.hpp"
#include "frm/common/time.hpp"
#include "frm/governance/governance.hpp"
#include "frm/riskmodel/model.hpp"

namespace frm::identification {

enum class DomainStatus { InScope, Excluded };

struct RiskDomainEntry {
  std::string id;
  std::string name;
  std::string source;  // taxonomy citation
  DomainStatus status = DomainStatus::InScope;
  std::string exclusion_justification;
  std::vector<std::string> linked_models;

  bool operator==(const RiskDomainEntry&) const = default;
};

// Follow-up work the engine tracks until someone closes it.
struct ActionItem {
  std::string id;
  std::string kind;     // define_risk_model | define_indicators | risk_model_stub | ...
  std::string subject;  // domain, model or finding id
  std::string description;
  bool open = true;

  bool operator==(const ActionItem&) const = default;
};

enum class Stage { Reported, Triaged, Investigating, Confirmed, Dismissed };
enum class Reporter { Internal, ThirdParty, Anonymous };
enum class FishboneCategory {
  Model,
  Data,
  ToolingScaffolding,
  UserBehavior,
  DeploymentContext,
  ExternalEnvironment,
};

struct Fishbone {
  FishboneCategory category = FishboneCategory::Model;
  std::string cause_notes;

  bool operator==(const Fishbone&) const = default;
};

struct StageChange {
  Stage from = Stage::Reported;
  Stage to = Stage::Reported;
  Timestamp at;
  std::string notes;

  bool operator==(const StageChange&) const = default;
};

struct Finding {
  std::string id;
  Reporter reporter = Reporter::Internal;
  std::string description;
  Stage stage = Stage::Reported;
  std::optional<Fishbone> fishbone;
  governance::Tier severity_estimate = governance::Tier::Low;
  std::vector<StageChange> history;
  std::vector<std::string> annotations;
  std::optional<Timestamp> due;
  std::string dismissal_justification;
  std::optional<std::string> promoted_model;

  bool operator==(const Finding&) const = default;
};

// The risk universe: domains, red-team findings and open follow-ups.
struct Universe {
  std::map<std::string, RiskDomainEntry> domains;
  std::map<std::string, Finding> findings;
  std::map<std::string, ActionItem> action_items;
  std::uint64_t next_finding = 1;
  std::uint64_t next_action = 1;

  std::vector<const ActionItem*> open_actions_for(std::string_view subject) const;
  bool operator==(const Universe&) const = default;
};

struct TaxonomyEntry {
  std::string name;
  std::string source;
  std::string id;  // derived from the name when empty
};

std::string slugify(std::string_view name);

// New domains start in scope with an open "define_risk_model" action.
// Throws DuplicateName on a repeated or already-known name or id.
std::vector<RiskDomainEntry> import_taxonomy(Universe& u, const std::vector<TaxonomyEntry>& entries,
                                             AuditBuffer& audit, const std::string& actor);

// Only a risk owner or the CRO may exclude a risk. Throws EmptyJustification,
// UnauthorizedRole, NotFound.
const RiskDomainEntry& exclude_risk(Universe& u, const std::string& domain_id,
                                    const std::string& justification,
                                    const governance::Role& approver, AuditBuffer& audit);

struct FindingIntake {
  Reporter reporter = Reporter::Internal;
  std::string description;
  governance::Tier severity_estimate = governance::Tier::Low;
  std::optional<Timestamp> due;
};

const Finding& report_finding(Universe& u, const FindingIntake& intake, Timestamp now,
                              AuditBuffer& audit, const std::string& actor);

// Legal moves: strictly forward through reported, triaged, investigating,
// confirmed; or from any open stage to dismissed. Confirming needs a
// fishbone (already present or given here); dismissing needs notes.
// Confirming a high-severity finding opens a risk_model_stub action.
const Finding& advance_finding(Universe& u, const std::string& finding_id, Stage to,
                               const std::string& notes, std::optional<Fishbone> fishbone,
                               Timestamp now, AuditBuffer& audit, const std::string& actor);

// Content edits are refused for third-party findings (they may only be
// annotated). Throws UnauthorizedRole in that case.
const Finding& edit_finding(Universe& u, const std::string& finding_id,
                            const std::string& description, AuditBuffer& audit,
                            const std::string& actor);
const Finding& annotate_finding(Universe& u, const std::string& finding_id,
                                const std::string& note, AuditBuffer& audit,
                                const std::string& actor);

// Registers `model` under its domain (created if needed), links it to the
// finding, closes the finding's stub task and opens a define_indicators
// action for the model. Idempotent. Throws NotConfirmed.
const RiskDomainEntry& promote_finding(Universe& u, std::map<std::string, riskmodel::RiskModel>& models,
                                       const std::string& finding_id, riskmodel::RiskModel model,
                                       AuditBuffer& audit, const std::string& actor);

// Registers a model under an existing domain and closes its define_risk_model
// action.
void link_model(Universe& u, const std::string& domain_id, const std::string& model_id);

std::string_view to_string(DomainStatus s);
DomainStatus parse_domain_status(std::string_view s);
std::string_view to_string(Stage s);
Stage parse_stage(std::string_view s);
std::string_view to_string(Reporter r);
Reporter parse_reporter(std::string_view r);
std::string_view to_string(FishboneCategory c);
FishboneCategory parse_fishbone(std::string_view c);

}  // namespace frm::identification
