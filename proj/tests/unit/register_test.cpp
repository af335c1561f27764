#include <gtest/gtest.h>

#include "frm/common/error.hpp"
#include "frm/register/audit_log.hpp"
#include "frm/register/codec.hpp"
#include "frm/register/disclosure.hpp"
#include "frm/register/operations.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace frm;
using namespace frm::registry;

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

struct World {
  Timestamp now = test::at("2026-06-01T00:00:00Z");
  std::unique_ptr<gateway::Engine> engine = test::cyber1_engine([this] { return now; });
  Snapshot snap() const { return *engine->snapshot(); }
  Settings settings() const { return engine->config().settings(); }
};

indicators::Measurement measure(const std::string& id, double value, std::optional<std::string> level, Timestamp at) {
  indicators::Measurement m;
  m.indicator_id = id;
  m.value = value;
  m.level = std::move(level);
  m.timestamp = at;
  return m;
}

}  // namespace

TEST(AuditLog, HashCoversEveryField) {
  AuditLog log;
  const auto t = test::at("2026-01-01T00:00:00Z");
  const auto& e0 = log.append("alice", AuditKind::Gate, Json{{"x", 1}}, t);
  EXPECT_EQ(e0.seq, 0u);
  EXPECT_EQ(e0.prev_hash, kGenesisHash);
  EXPECT_EQ(e0.hash, compute_hash(kGenesisHash, e0.payload, 0, t));
  EXPECT_EQ(e0.actor(), "alice");
  EXPECT_EQ(e0.kind(), AuditKind::Gate);
  EXPECT_EQ(e0.body(), (Json{{"x", 1}}));
  const auto& e1 = log.append("bob", AuditKind::Edit, Json::object(), t);
  EXPECT_EQ(e1.prev_hash, log.events()[0].hash);
  EXPECT_TRUE(verify_chain(log.events()).ok);

  auto events = log.events();
  events[0].payload = make_payload("mallory", AuditKind::Gate, Json{{"x", 1}});
  const auto v = verify_chain(events);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.first_bad_seq, 0u);
  EXPECT_EQ(code_of([&] { AuditLog bad(events); }), ErrorCode::ChainBroken);
}

TEST(AuditLog, NextEventMatchesAppend) {
  AuditLog log;
  const auto t = test::at("2026-01-01T00:00:00Z");
  log.append("a", AuditKind::Edit, Json::object(), t);
  const auto preview = log.next_event("b", AuditKind::Approval, Json{{"y", 2}}, t);
  EXPECT_EQ(log.size(), 1u);
  EXPECT_EQ(log.append("b", AuditKind::Approval, Json{{"y", 2}}, t), preview);
}

TEST(AuditLog, Sha256KnownAnswer) {
  EXPECT_EQ(to_hex(sha256("abc")), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(digest_from_hex(to_hex(sha256("x"))), sha256("x"));
  EXPECT_THROW(digest_from_hex("zz"), Error);
}

TEST(AuditLog, DecodeReportsTornTail) {
  AuditLog log;
  const auto t = test::at("2026-01-01T00:00:00Z");
  for (int i = 0; i < 3; ++i) log.append("a", AuditKind::Edit, Json{{"i", i}}, t);
  std::string bytes;
  for (const auto& e : log.events()) bytes += encode_record(e);
  const auto full = decode_log(bytes);
  EXPECT_EQ(full.events, log.events());
  EXPECT_FALSE(full.torn_tail);
  EXPECT_EQ(full.complete_bytes, bytes.size());
  const auto torn = decode_log(bytes.substr(0, bytes.size() - 5));
  EXPECT_EQ(torn.events.size(), 2u);
  EXPECT_TRUE(torn.torn_tail);
  EXPECT_FALSE(verify_log_bytes(bytes.substr(0, bytes.size() - 5)).ok);
}

TEST(AuditProperty, TamperAndReorderDetection) {
  const auto r = test::check_audit_chain(100, 10, 6006);
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Codec, FixtureRoundTripsAndKeepsUnknownFields) {
  World w;
  auto s = w.snap();
  const std::string a = export_register(s);
  EXPECT_EQ(export_register(import_register(a)), a);
  EXPECT_EQ(import_register(a), s);

  Json doc = canonical_parse(a);
  doc["x_vendor"] = Json{{"note", "kept"}};
  doc["models"][0]["x_reviewer"] = "dana";
  const std::string with_extras = canonical_dump(doc);
  const auto back = import_register(with_extras);
  EXPECT_EQ(export_register(back), with_extras);
}

TEST(Codec, SchemaErrorsNameThePath) {
  World w;
  Json doc = canonical_parse(export_register(w.snap()));
  ASSERT_EQ(doc["models"][0]["id"], "CYBER-1");
  doc["models"][0]["initiating_frequency"] = "often";
  try {
    import_register(canonical_dump(doc));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaViolation);
    EXPECT_NE(e.detail().find("initiating_frequency"), std::string::npos) << e.detail();
  }
  doc = canonical_parse(export_register(w.snap()));
  doc["format_version"] = 99;
  EXPECT_EQ(code_of([&] { import_register(canonical_dump(doc)); }), ErrorCode::VersionMismatch);
}

TEST(CodecProperty, RandomSnapshotsRoundTrip) {
  const auto r = test::check_round_trip(40, 7007);
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Entries, Cyber1LevelsAndMapping) {
  World w;
  const auto s = w.snap();
  const auto& e = s.entries.at("RISK-CYBER-1");
  // No measurements yet: the KRI sits at its scale maximum.
  EXPECT_NEAR(e.inherent_risk.rate, 0.05, 1e-15);
  EXPECT_NEAR(e.residual_risk.rate, 0.005, 1e-15);
  ASSERT_EQ(e.mapping.size(), 1u);
  EXPECT_NEAR(e.mapping[0].expected_residual, 0.005, 1e-15);
  EXPECT_NEAR(domain_residuals(s).at("cyber").rate, 0.005, 1e-15);
}

TEST(Entries, Validation) {
  World w;
  auto s = w.snap();
  AuditBuffer audit;
  const Json base = canonical_parse(test::fixture_text("cyber1-entry.json"));
  for (const char* field : {"risk_owner", "model_id", "kris", "kcis", "mapping", "action_plan"}) {
    Json j = base;
    j.erase(field);
    try {
      decode_entry_draft(j);
      FAIL() << field;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MissingField);
      EXPECT_EQ(e.detail(), field);
    }
  }
  Json j = base;
  j["risk_owner"] = "svp";  // a senior manager, not a risk owner
  EXPECT_EQ(code_of([&] { upsert_entry(s, decode_entry_draft(j), w.settings(), w.now, audit, "t"); }), ErrorCode::UnknownOwner);
  j["risk_owner"] = "nobody";
  EXPECT_EQ(code_of([&] { upsert_entry(s, decode_entry_draft(j), w.settings(), w.now, audit, "t"); }), ErrorCode::UnknownOwner);
  j = base;
  j["model_id"] = "NOPE";
  EXPECT_EQ(code_of([&] { upsert_entry(s, decode_entry_draft(j), w.settings(), w.now, audit, "t"); }), ErrorCode::NotFound);
}

TEST(Completeness, GapsAreDomainsWithoutEntriesOrActions) {
  World w;
  auto s = w.snap();
  // bio has its open define_risk_model action, cyber has an entry.
  EXPECT_TRUE(completeness_gaps(s).empty());
  for (auto& [id, a] : s.universe.action_items) {
    if (a.subject == "bio") a.open = false;
  }
  EXPECT_EQ(completeness_gaps(s), std::vector<std::string>{"bio"});
  s.universe.domains.at("bio").status = identification::DomainStatus::Excluded;
  EXPECT_TRUE(completeness_gaps(s).empty());
}

TEST(Rules, BreachOpensEscalationAndHoldUntilResolved) {
  World w;
  auto s = w.snap();
  auto settings = w.settings();
  AuditBuffer audit;
  record_measurements(s, {measure("cybench", 65, std::nullopt, w.now), measure("security-level", 0, "L2", w.now)},
                      settings, w.now, audit, "t");
  ASSERT_EQ(s.breaches.size(), 1u);
  EXPECT_TRUE(s.lifecycle.hold);
  const auto esc_id = s.breaches[0].escalation_id;
  const auto* esc = s.find_escalation(esc_id);
  ASSERT_NE(esc, nullptr);
  EXPECT_EQ(esc->source, "R-CYBER-60");
  EXPECT_EQ(esc->severity, governance::Tier::High);

  // Resolution needs the escalation_resolution approvals.
  EXPECT_THROW(resolve_escalation(s, esc_id, "ok", {{"owner-cyber", true}}, settings, w.now, audit, "t"), Error);
  // Resolved while the rule is still breached: the hold stays.
  resolve_escalation(s, esc_id, "accept", {{"owner-cyber", true}, {"svp", true}}, settings, w.now, audit, "t");
  EXPECT_TRUE(s.lifecycle.hold);
  // Controls restored: the breach clears and the hold lifts.
  const auto later = w.now + std::chrono::hours(1);
  record_measurements(s, {measure("security-level", 0, "L3", later)}, settings, later, audit, "t");
  EXPECT_TRUE(s.breaches[0].cleared_at);
  EXPECT_FALSE(s.lifecycle.hold);
}

TEST(Rules, RejectsFutureAndOutOfScaleMeasurements) {
  World w;
  auto s = w.snap();
  AuditBuffer audit;
  EXPECT_THROW(record_measurements(s, {measure("cybench", 30, std::nullopt, w.now + std::chrono::hours(1))},
                                   w.settings(), w.now, audit, "t"),
               Error);
  EXPECT_EQ(code_of([&] { record_measurements(s, {measure("cybench", 300, std::nullopt, w.now)}, w.settings(), w.now, audit, "t"); }),
            ErrorCode::InvalidIndicator);
  EXPECT_EQ(s, w.snap());
}

TEST(WhatIf, ReadOnlyRecompute) {
  World w;
  const auto s = w.snap();
  WhatIf o;
  o.kri_values["cybench"] = 60;
  o.kci_levels["security-level"] = "L4";
  const auto r = what_if(s, o, w.settings(), w.now);
  EXPECT_NEAR(r.entries.at("RISK-CYBER-1").residual.rate, 0.001, 1e-15);
  ASSERT_EQ(r.statuses.size(), 1u);
  EXPECT_EQ(r.statuses[0].state, indicators::RuleState::Satisfied);
  // bio is allocated budget but has no model, so no compliance verdict.
  EXPECT_FALSE(r.compliance);
  EXPECT_EQ(s, w.snap());

  auto cyber_only = s;
  cyber_only.budget->allocations.erase("bio");
  const auto c = what_if(cyber_only, o, w.settings(), w.now);
  ASSERT_TRUE(c.compliance);
  EXPECT_TRUE(c.compliance->pass);
  o.kci_levels["security-level"] = "L1";
  EXPECT_FALSE(what_if(cyber_only, o, w.settings(), w.now).compliance->pass);
}

TEST(Disclosure, DeterministicAndPeriodChecked) {
  World w;
  auto s = w.snap();
  AuditBuffer audit;
  record_measurements(s, {measure("cybench", 65, std::nullopt, w.now), measure("security-level", 0, "L1", w.now)},
                      w.settings(), w.now, audit, "t");
  const Period p{test::at("2026-01-01T00:00:00Z"), test::at("2027-01-01T00:00:00Z")};
  const auto g = w.engine->config().governance;
  for (auto kind : {DisclosureKind::RiskDisclosure, DisclosureKind::GovernanceDisclosure, DisclosureKind::IncidentReport}) {
    EXPECT_EQ(canonical_dump(generate_disclosure(kind, p, s, g).to_json()),
              canonical_dump(generate_disclosure(kind, p, s, g).to_json()));
  }
  const auto inc = generate_disclosure(DisclosureKind::IncidentReport, p, s, g).body;
  EXPECT_EQ(inc.at("count"), 1);
  EXPECT_EQ(inc.at("incidents")[0].at("status"), "active");
  const auto before = generate_disclosure(DisclosureKind::IncidentReport,
                                          {test::at("2025-01-01T00:00:00Z"), test::at("2025-06-01T00:00:00Z")}, s, g);
  EXPECT_EQ(before.body.at("count"), 0);
  EXPECT_EQ(code_of([&] { generate_disclosure(DisclosureKind::RiskDisclosure, {p.to, p.from}, s, g); }), ErrorCode::EmptyPeriod);
  EXPECT_EQ(code_of([] { parse_disclosure_kind("gossip"); }), ErrorCode::NotFound);
}
