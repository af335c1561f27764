#include <gtest/gtest.h>

#include "frm/common/error.hpp"
#include "frm/identification/identification.hpp"
#include "support.hpp"

using namespace frm;
using namespace frm::identification;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

const governance::Role kOwner{"owner", governance::RoleKind::RiskOwner, "ann"};
const governance::Role kCro{"cro", governance::RoleKind::Cro, "bo"};
const governance::Role kStaff{"erm", governance::RoleKind::ErmStaff, "cy"};
const Timestamp kNow = test::at("2026-01-01T00:00:00Z");

Universe with_domains(AuditBuffer& audit) {
  Universe u;
  import_taxonomy(u, {{"Cyber offense", "taxonomy", "cyber"}, {"Biological weapons uplift", "taxonomy", ""}}, audit, "t");
  return u;
}

}  // namespace

TEST(Taxonomy, ImportOpensModelActions) {
  AuditBuffer audit;
  const auto u = with_domains(audit);
  EXPECT_EQ(u.domains.size(), 2u);
  EXPECT_TRUE(u.domains.count("biological-weapons-uplift"));
  EXPECT_EQ(u.open_actions_for("cyber").size(), 1u);
  EXPECT_EQ(u.open_actions_for("cyber")[0]->kind, "define_risk_model");
  EXPECT_FALSE(audit.empty());
}

TEST(Taxonomy, DuplicatesRejected) {
  AuditBuffer audit;
  auto u = with_domains(audit);
  EXPECT_EQ(code_of([&] { import_taxonomy(u, {{"Cyber offense", "x", ""}}, audit, "t"); }), ErrorCode::DuplicateName);
  Universe v;
  EXPECT_EQ(code_of([&] { import_taxonomy(v, {{"A", "x", "a"}, {"A", "y", "b"}}, audit, "t"); }), ErrorCode::DuplicateName);
  EXPECT_EQ(slugify("Cyber  Offense (AI)!"), "cyber-offense-ai");
}

TEST(Exclusion, OwnerOrCroWithJustification) {
  AuditBuffer audit;
  auto u = with_domains(audit);
  EXPECT_EQ(code_of([&] { exclude_risk(u, "cyber", "  ", kOwner, audit); }), ErrorCode::EmptyJustification);
  EXPECT_EQ(code_of([&] { exclude_risk(u, "cyber", "not relevant", kStaff, audit); }), ErrorCode::UnauthorizedRole);
  EXPECT_EQ(code_of([&] { exclude_risk(u, "nope", "x", kCro, audit); }), ErrorCode::NotFound);
  const auto before = audit.size();
  const auto& d = exclude_risk(u, "cyber", "no such capability", kCro, audit);
  EXPECT_EQ(d.status, DomainStatus::Excluded);
  EXPECT_EQ(d.exclusion_justification, "no such capability");
  ASSERT_GT(audit.size(), before);
  EXPECT_EQ(audit.back().kind, AuditKind::Exclusion);
}

TEST(Findings, ForwardOnlyWithFishboneToConfirm) {
  AuditBuffer audit;
  Universe u;
  const auto id = report_finding(u, {Reporter::Internal, "agent escaped sandbox", governance::Tier::High, std::nullopt},
                                 kNow, audit, "rt").id;
  advance_finding(u, id, Stage::Triaged, "", std::nullopt, kNow, audit, "rt");
  advance_finding(u, id, Stage::Investigating, "", std::nullopt, kNow, audit, "rt");
  EXPECT_EQ(code_of([&] { advance_finding(u, id, Stage::Triaged, "", std::nullopt, kNow, audit, "rt"); }),
            ErrorCode::IllegalTransition);
  EXPECT_EQ(code_of([&] { advance_finding(u, id, Stage::Investigating, "", std::nullopt, kNow, audit, "rt"); }),
            ErrorCode::IllegalTransition);
  EXPECT_THROW(advance_finding(u, id, Stage::Confirmed, "", std::nullopt, kNow, audit, "rt"), Error);
  const auto& f = advance_finding(u, id, Stage::Confirmed, "", Fishbone{FishboneCategory::ToolingScaffolding, "shell tool"},
                                  kNow, audit, "rt");
  EXPECT_EQ(f.stage, Stage::Confirmed);
  EXPECT_EQ(f.history.size(), 4u);  // reported, triaged, investigating, confirmed
  // A confirmed high-severity finding gets a model stub task.
  const auto stubs = u.open_actions_for(id);
  ASSERT_EQ(stubs.size(), 1u);
  EXPECT_EQ(stubs[0]->kind, "risk_model_stub");
  EXPECT_EQ(code_of([&] { advance_finding(u, id, Stage::Triaged, "", std::nullopt, kNow, audit, "rt"); }),
            ErrorCode::IllegalTransition);
}

TEST(Findings, TriagedMayGoStraightToConfirmed) {
  AuditBuffer audit;
  Universe u;
  const auto id = report_finding(u, {Reporter::Internal, "x", governance::Tier::High, std::nullopt}, kNow, audit, "rt").id;
  advance_finding(u, id, Stage::Triaged, "", std::nullopt, kNow, audit, "rt");
  advance_finding(u, id, Stage::Confirmed, "", Fishbone{FishboneCategory::Data, "poisoned"}, kNow, audit, "rt");
  EXPECT_EQ(u.open_actions_for(id).size(), 1u);
}

TEST(Findings, DismissNeedsNotes) {
  AuditBuffer audit;
  Universe u;
  const auto id = report_finding(u, {Reporter::Anonymous, "odd output", governance::Tier::Low, std::nullopt}, kNow, audit, "rt").id;
  EXPECT_THROW(advance_finding(u, id, Stage::Dismissed, "", std::nullopt, kNow, audit, "rt"), Error);
  EXPECT_EQ(advance_finding(u, id, Stage::Dismissed, "duplicate of F-0001", std::nullopt, kNow, audit, "rt").stage,
            Stage::Dismissed);
}

TEST(Findings, ThirdPartyFindingsAreAnnotatedNotEdited) {
  AuditBuffer audit;
  Universe u;
  const auto id = report_finding(u, {Reporter::ThirdParty, "original text", governance::Tier::Medium, std::nullopt},
                                 kNow, audit, "rt").id;
  EXPECT_EQ(code_of([&] { edit_finding(u, id, "rewritten", audit, "staff"); }), ErrorCode::UnauthorizedRole);
  const auto& f = annotate_finding(u, id, "reproduced internally", audit, "staff");
  EXPECT_EQ(f.description, "original text");
  EXPECT_EQ(f.annotations, std::vector<std::string>{"reproduced internally"});
}

TEST(Findings, PromotionRegistersModel) {
  AuditBuffer audit;
  Universe u;
  std::map<std::string, riskmodel::RiskModel> models;
  const auto id = report_finding(u, {Reporter::Internal, "novel exploit chain", governance::Tier::High, std::nullopt},
                                 kNow, audit, "rt").id;
  riskmodel::RiskModel m{"cyber", test::cyber1_chain()};
  EXPECT_EQ(code_of([&] { promote_finding(u, models, id, m, audit, "rt"); }), ErrorCode::NotConfirmed);
  advance_finding(u, id, Stage::Triaged, "", std::nullopt, kNow, audit, "rt");
  advance_finding(u, id, Stage::Investigating, "", std::nullopt, kNow, audit, "rt");
  advance_finding(u, id, Stage::Confirmed, "", Fishbone{FishboneCategory::Model, "capability"}, kNow, audit, "rt");
  const auto& d = promote_finding(u, models, id, m, audit, "rt");
  EXPECT_EQ(d.id, "cyber");
  EXPECT_EQ(d.linked_models, std::vector<std::string>{"CYBER-1"});
  EXPECT_TRUE(models.count("CYBER-1"));
  EXPECT_TRUE(u.open_actions_for(id).empty());
  ASSERT_EQ(u.open_actions_for("CYBER-1").size(), 1u);
  EXPECT_EQ(u.open_actions_for("CYBER-1")[0]->kind, "define_indicators");
  EXPECT_EQ(u.findings.at(id).promoted_model, "CYBER-1");
  // Promoting again changes nothing.
  const auto snapshot = u;
  promote_finding(u, models, id, m, audit, "rt");
  EXPECT_EQ(u, snapshot);
}
