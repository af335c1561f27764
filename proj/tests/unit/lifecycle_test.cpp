#include <gtest/gtest.h>

#include "frm/common/error.hpp"
#include "frm/lifecycle/gate.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace frm;
using namespace frm::lifecycle;

namespace {

struct World {
  Timestamp now = test::at("2026-06-01T00:00:00Z");
  std::unique_ptr<gateway::Engine> engine = test::cyber1_engine([this] { return now; });
  registry::Snapshot s = *engine->snapshot();
  registry::Settings settings = engine->config().settings();
  AuditBuffer audit;

  void measure(const std::string& id, double value, std::optional<std::string> level, std::optional<double> compute = {}) {
    indicators::Measurement m;
    m.indicator_id = id;
    m.value = value;
    m.level = std::move(level);
    m.timestamp = now;
    m.effective_compute = compute;
    registry::record_measurements(s, {m}, settings, now, audit, "t");
  }
};

const std::vector<governance::Approval> kApprove = {{"owner-cyber", true}, {"cro", true}};

}  // namespace

TEST(Phases, Order) {
  EXPECT_EQ(next_phase(Phase::Planning), Phase::Training);
  EXPECT_EQ(next_phase(Phase::Training), Phase::Deployed);
  EXPECT_EQ(next_phase(Phase::Deployed), std::nullopt);
  EXPECT_EQ(parse_phase(to_string(Phase::Training)), Phase::Training);
}

TEST(Gate, PlanningToTrainingChecks) {
  World w;
  auto d = evaluate_gate(w.s, Phase::Training, kApprove, w.settings, w.now);
  EXPECT_TRUE(d.check(kCheckToleranceBudget)->pass);
  EXPECT_FALSE(d.check(kCheckDomainsModeled)->pass);  // bio has no model
  EXPECT_NE(d.check(kCheckDomainsModeled)->evidence.find("bio"), std::string::npos);
  EXPECT_FALSE(d.check(kCheckMitigationsPlanned)->pass);
  EXPECT_TRUE(d.check(kCheckApprovals)->pass);
  EXPECT_EQ(d.check(kCheckRedTeam), nullptr);
  EXPECT_FALSE(d.pass);
  EXPECT_EQ(d.from, Phase::Planning);

  const governance::Role cro{"cro", governance::RoleKind::Cro, "b.osei"};
  identification::exclude_risk(w.s.universe, "bio", "out of scope for this model", cro, w.audit);
  // The 0.006 allocation needs at least L3 at the threshold of 60.
  w.s.planned_mitigations.push_back({"security-level", "L2", "partial"});
  d = evaluate_gate(w.s, Phase::Training, kApprove, w.settings, w.now);
  EXPECT_TRUE(d.check(kCheckDomainsModeled)->pass);
  EXPECT_FALSE(d.check(kCheckMitigationsPlanned)->pass);
  EXPECT_NE(d.check(kCheckMitigationsPlanned)->evidence.find("L3"), std::string::npos);
  w.s.planned_mitigations.push_back({"security-level", "L3", "hardened weights storage"});
  d = evaluate_gate(w.s, Phase::Training, kApprove, w.settings, w.now);
  EXPECT_TRUE(d.pass) << d.to_json().dump();

  transition(w.s, d, w.now, w.audit, "t");
  EXPECT_EQ(w.s.lifecycle.phase, Phase::Training);
  ASSERT_EQ(w.s.lifecycle.history.size(), 1u);
  EXPECT_EQ(w.s.lifecycle.history[0].approved_by, (std::vector<std::string>{"owner-cyber", "cro"}));
  EXPECT_EQ(w.audit.back().kind, AuditKind::Gate);
}

TEST(Gate, ForecastBeyondPlannedComputeNeedsNoMitigation) {
  World w;
  w.s.lifecycle.planned_compute = 1e24;
  w.measure("cybench", 30, std::nullopt, 1e22);
  w.measure("cybench", 50, std::nullopt, 1e24);
  // The fit crosses 60 at 1e25 FLOP, beyond the planned run.
  auto d = evaluate_gate(w.s, Phase::Training, kApprove, w.settings, w.now);
  EXPECT_TRUE(d.check(kCheckMitigationsPlanned)->pass) << d.check(kCheckMitigationsPlanned)->evidence;
  w.s.lifecycle.planned_compute = 2e25;
  d = evaluate_gate(w.s, Phase::Training, kApprove, w.settings, w.now);
  EXPECT_FALSE(d.check(kCheckMitigationsPlanned)->pass);
}

TEST(Gate, ApprovalsAndTargets) {
  World w;
  auto d = evaluate_gate(w.s, Phase::Training, {{"owner-cyber", true}}, w.settings, w.now);
  EXPECT_FALSE(d.check(kCheckApprovals)->pass);
  d = evaluate_gate(w.s, Phase::Training, {{"owner-cyber", true}, {"cro", true}, {"ia", true}}, w.settings, w.now);
  EXPECT_FALSE(d.check(kCheckApprovals)->pass);
  try {
    evaluate_gate(w.s, Phase::Deployed, kApprove, w.settings, w.now);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNextPhase);
  }
  try {
    transition(w.s, d, w.now, w.audit, "t");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GateFailed);
  }
}

TEST(Gate, TrainingToDeployedAndHold) {
  World w;
  w.s.lifecycle.phase = Phase::Training;
  w.s.lifecycle.model_label = "m-1";
  auto d = evaluate_gate(w.s, Phase::Deployed, kApprove, w.settings, w.now);
  EXPECT_TRUE(d.check(kCheckNoBreach)->pass);
  EXPECT_FALSE(d.check(kCheckRedTeam)->pass);
  EXPECT_TRUE(d.check(kCheckFindings)->pass);
  w.s.redteam_records.push_back({"RT-0001", "m-1", w.now, "open-ended probing"});

  identification::report_finding(w.s.universe, {identification::Reporter::Internal, "weights exfil path", governance::Tier::High, std::nullopt},
                                 w.now, w.audit, "rt");
  d = evaluate_gate(w.s, Phase::Deployed, kApprove, w.settings, w.now);
  EXPECT_TRUE(d.check(kCheckRedTeam)->pass);
  EXPECT_FALSE(d.check(kCheckFindings)->pass);
  identification::advance_finding(w.s.universe, "F-0001", identification::Stage::Dismissed, "not reproducible",
                                  std::nullopt, w.now, w.audit, "rt");

  w.measure("security-level", 0, "L1");
  w.measure("cybench", 70, std::nullopt);
  EXPECT_TRUE(w.s.lifecycle.hold);
  d = evaluate_gate(w.s, Phase::Deployed, kApprove, w.settings, w.now);
  EXPECT_FALSE(d.check(kCheckNoBreach)->pass);
  try {
    transition(w.s, d, w.now, w.audit, "t");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HoldActive);
  }
  EXPECT_EQ(w.s.lifecycle.phase, Phase::Training);

  w.measure("security-level", 0, "L4");
  const auto esc = w.s.breaches.at(0).escalation_id;
  registry::resolve_escalation(w.s, esc, "controls restored", {{"owner-cyber", true}, {"svp", true}}, w.settings, w.now,
                               w.audit, "t");
  EXPECT_FALSE(w.s.lifecycle.hold);
  d = evaluate_gate(w.s, Phase::Deployed, kApprove, w.settings, w.now);
  EXPECT_TRUE(d.pass) << d.to_json().dump();
  transition(w.s, d, w.now, w.audit, "t");
  EXPECT_EQ(w.s.lifecycle.phase, Phase::Deployed);
}

TEST(LifecycleProperty, NoDeploymentWithUnresolvedBreach) {
  const auto r = test::check_lifecycle(2000, 8008);
  EXPECT_TRUE(r.pass) << r.detail;
}
