#include <gtest/gtest.h>

#include "frm/common/error.hpp"
#include "frm/governance/governance.hpp"
#include "support.hpp"

using namespace frm;
using namespace frm::governance;

namespace {

const std::vector<Role> kRoles = {
    {"owner", RoleKind::RiskOwner, "ann"},   {"cro", RoleKind::Cro, "bo"},
    {"svp", RoleKind::SeniorManager, "cy"},  {"board", RoleKind::BoardAuditCommittee, "di"},
    {"ia", RoleKind::InternalAudit, "ed"},
};

}  // namespace

TEST(Separation, CleanAssignmentHasNoViolations) { EXPECT_TRUE(check_separation(kRoles).empty()); }

TEST(Separation, ReportsEachRule) {
  auto roles = kRoles;
  roles.push_back({"cro-owner", RoleKind::RiskOwner, "bo"});  // CRO owning a risk
  roles.push_back({"ia-mgr", RoleKind::SeniorManager, "ed"});  // auditor in management
  roles.erase(std::remove_if(roles.begin(), roles.end(), [](const Role& r) { return r.id == "board"; }), roles.end());
  const auto v = check_separation(roles);
  std::set<std::string> rules;
  for (const auto& x : v) rules.insert(x.rule);
  EXPECT_EQ(rules, (std::set<std::string>{"audit_independent_of_management", "audit_reports_to_board", "cro_not_risk_owner"}));
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.rule < b.rule; }));
}

TEST(Approval, RequiredAndForbiddenKinds) {
  const auto p = default_policy();
  auto out = require_approval(ActionKind::GateTransition, p, {{"owner", true}, {"cro", true}}, kRoles);
  EXPECT_TRUE(out.allowed) << out.reason;
  EXPECT_EQ(out.approved_by, (std::vector<std::string>{"owner", "cro"}));

  out = require_approval(ActionKind::GateTransition, p, {{"owner", true}}, kRoles);
  EXPECT_FALSE(out.allowed);
  EXPECT_FALSE(out.reason.empty());

  out = require_approval(ActionKind::GateTransition, p, {{"owner", true}, {"cro", false}}, kRoles);
  EXPECT_FALSE(out.allowed);

  // Audit must not take part in management decisions.
  out = require_approval(ActionKind::GateTransition, p, {{"owner", true}, {"cro", true}, {"ia", true}}, kRoles);
  EXPECT_FALSE(out.allowed);

  out = require_approval(ActionKind::GateTransition, p, {{"owner", true}, {"cro", true}, {"ghost", true}}, kRoles);
  EXPECT_FALSE(out.allowed);

  EXPECT_TRUE(require_approval(ActionKind::Exclusion, p, {}, kRoles).allowed);
}

TEST(Approval, PolicyValidation) {
  ApprovalPolicy p;
  p.rules[ActionKind::Exclusion] = {{RoleKind::Cro}, {RoleKind::Cro}};
  EXPECT_THROW(p.validate(), Error);
  EXPECT_NO_THROW(default_policy().validate());
  EXPECT_THROW(parse_action_kind("delete_everything"), Error);
}

TEST(Escalation, NotifyChains) {
  EXPECT_EQ(notify_chain(Tier::Low), (std::vector<RoleKind>{RoleKind::RiskOwner}));
  EXPECT_EQ(notify_chain(Tier::Medium), (std::vector<RoleKind>{RoleKind::RiskOwner, RoleKind::Cro, RoleKind::SeniorManager}));
  EXPECT_EQ(notify_chain(Tier::High), (std::vector<RoleKind>{RoleKind::RiskOwner, RoleKind::Cro, RoleKind::SeniorManager,
                                                             RoleKind::BoardAuditCommittee}));
}

TEST(Escalation, DeadlinesResolutionAndOverdue) {
  const auto now = test::at("2026-01-01T00:00:00Z");
  EscalationTiers tiers;
  auto high = escalate("E-0001", "R-1", Tier::High, now, tiers, {"R-1"});
  auto low = escalate("E-0002", "R-1", Tier::Low, now, tiers, {"R-1"});
  EXPECT_EQ(high.deadline, now + std::chrono::hours(24));
  EXPECT_EQ(low.deadline, now + std::chrono::hours(24 * 30));
  EXPECT_EQ(overdue({high, low}, now + std::chrono::hours(25)), std::vector<std::string>{"E-0001"});
  resolve(high, {"owner", now + std::chrono::hours(2), "restored"});
  EXPECT_FALSE(high.open());
  EXPECT_TRUE(overdue({high, low}, now + std::chrono::hours(25)).empty());
  try {
    resolve(high, {"owner", now, "again"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IllegalTransition);
  }
  try {
    escalate("E-0003", "R-unknown", Tier::High, now, tiers, {"R-1"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownSource);
  }
}
