#include <gtest/gtest.h>

#include "frm/common/error.hpp"
#include "frm/tolerance/tolerance.hpp"
#include "properties.hpp"

using namespace frm;
using namespace frm::tolerance;

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

const auto kFloor = Severity::quantitative(5e8, "USD");

}  // namespace

TEST(Normalize, Units) {
  EXPECT_DOUBLE_EQ(normalize_rate(1e-9, RateUnit::FlightHour), 8.76e-6);
  EXPECT_DOUBLE_EQ(normalize_rate(0.5, RateUnit::PlaneYear), 0.5);
  EXPECT_DOUBLE_EQ(normalize_rate(0.5, RateUnit::Year), 0.5);
  EXPECT_DOUBLE_EQ(normalize_rate(0.5, RateUnit::Month), 6.0);
  EXPECT_DOUBLE_EQ(normalize_rate(1.0, "flight_hour", 1000.0), 1000.0);
  EXPECT_EQ(code_of([] { normalize_rate(1.0, "fortnight"); }), ErrorCode::UnknownUnit);
}

TEST(Normalize, FaaAnchor) {
  const auto r = test::check_faa_anchor();
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Tolerance, CoversBySeverity) {
  const auto q = RiskTolerance::quantitative(0.01, kFloor);
  EXPECT_TRUE(q.covers(Severity::quantitative(1e9, "USD")));
  EXPECT_TRUE(q.covers(kFloor));
  EXPECT_FALSE(q.covers(Severity::quantitative(1e8, "USD")));
  EXPECT_FALSE(q.covers(Severity::quantitative(1e9, "casualties")));
  const auto s = RiskTolerance::scenario_bounded("grid outage", 0.001);
  EXPECT_TRUE(s.covers(Severity::qualitative("grid outage")));
  EXPECT_FALSE(s.covers(Severity::qualitative("other")));
}

TEST(Budget, ValidatesShares) {
  const auto total = RiskTolerance::quantitative(0.01, kFloor);
  EXPECT_NO_THROW(allocate_budget(total, {{"cyber", 0.006}, {"bio", 0.004}}));
  EXPECT_EQ(code_of([&] { allocate_budget(total, {{"cyber", 0.006}, {"bio", 0.0041}}); }), ErrorCode::Oversubscribed);
  EXPECT_EQ(code_of([&] { allocate_budget(total, {{"cyber", 0.0}}); }), ErrorCode::NonPositiveShare);
  EXPECT_EQ(code_of([&] { allocate_budget(total, {{"cyber", -0.001}}); }), ErrorCode::NonPositiveShare);
}

TEST(Budget, ComplianceReport) {
  const auto total = RiskTolerance::quantitative(0.01, kFloor);
  const auto ledger = allocate_budget(total, {{"cyber", 0.006}, {"bio", 0.004}});
  auto report = check_compliance(ledger, {{"cyber", {0.005, kFloor, std::nullopt}}, {"bio", {0.001, kFloor, std::nullopt}}});
  EXPECT_TRUE(report.pass);
  EXPECT_NEAR(report.aggregate_residual, 0.006, 1e-15);
  report = check_compliance(ledger, {{"cyber", {0.007, kFloor, std::nullopt}}, {"bio", {0.001, kFloor, std::nullopt}}});
  EXPECT_FALSE(report.pass);
  EXPECT_FALSE(report.per_domain.at("cyber").pass);
  EXPECT_TRUE(report.per_domain.at("bio").pass);
  // A domain outside the ledger has nothing allocated.
  report = check_compliance(ledger, {{"cyber", {0.001, kFloor, std::nullopt}}, {"bio", {0.001, kFloor, std::nullopt}},
                                     {"misc", {1e-6, kFloor, std::nullopt}}});
  EXPECT_FALSE(report.pass);
  EXPECT_EQ(report.per_domain.at("misc").allocated, 0.0);
  EXPECT_EQ(code_of([&] { check_compliance(ledger, {{"cyber", {0.001, kFloor, std::nullopt}}}); }),
            ErrorCode::MissingResidual);
}

TEST(BudgetProperty, NeverOversubscribed) {
  const auto r = test::check_budget_ledger(2000, 2002);
  EXPECT_TRUE(r.pass) << r.detail;
}
