#include "frm/tolerance/tolerance.hpp"

#include <cmath>

#include "frm/common/error.hpp"

namespace frm::tolerance {
namespace {

// Shares are summed in floating point; a sum that exceeds the total only by
// accumulated rounding is not oversubscription.
constexpr double kRelativeSlack = 1e-12;

}  // namespace

RateUnit parse_rate_unit(std::string_view name) {
  if (name == "flight_hour") return RateUnit::FlightHour;
  if (name == "plane_year") return RateUnit::PlaneYear;
  if (name == "year") return RateUnit::Year;
  if (name == "month") return RateUnit::Month;
  throw Error(ErrorCode::UnknownUnit, std::string(name));
}

std::string_view to_string(RateUnit unit) {
  switch (unit) {
    case RateUnit::FlightHour: return "flight_hour";
    case RateUnit::PlaneYear: return "plane_year";
    case RateUnit::Year: return "year";
    case RateUnit::Month: return "month";
  }
  return "year";
}

double normalize_rate(double value, RateUnit per_unit, double hours_per_year) {
  if (!(value >= 0.0)) throw Error(ErrorCode::InvalidArgument, "rate must be >= 0");
  if (!(hours_per_year > 0.0)) throw Error(ErrorCode::InvalidArgument, "hours_per_year must be > 0");
  switch (per_unit) {
    case RateUnit::FlightHour: return value * hours_per_year;
    case RateUnit::PlaneYear: return value;
    case RateUnit::Year: return value;
    case RateUnit::Month: return value * 12.0;
  }
  return value;
}

double normalize_rate(double value, std::string_view per_unit, double hours_per_year) {
  return normalize_rate(value, parse_rate_unit(per_unit), hours_per_year);
}

long long years_per_event(double rate_per_year) {
  if (!(rate_per_year > 0.0)) throw Error(ErrorCode::InvalidArgument, "rate must be > 0");
  return std::llround(1.0 / rate_per_year);
}

RiskTolerance RiskTolerance::quantitative(double max_rate, Severity floor, std::string basis_note) {
  RiskTolerance t;
  t.form = Form::Quantitative;
  t.max_rate = max_rate;
  t.severity_floor = std::move(floor);
  t.basis_note = std::move(basis_note);
  t.validate();
  return t;
}

RiskTolerance RiskTolerance::scenario_bounded(std::string label, double max_rate,
                                              std::string basis_note) {
  RiskTolerance t;
  t.form = Form::ScenarioBounded;
  t.max_rate = max_rate;
  t.scenario_label = std::move(label);
  t.basis_note = std::move(basis_note);
  t.validate();
  return t;
}

void RiskTolerance::validate() const {
  if (!(max_rate > 0.0 && std::isfinite(max_rate))) {
    throw Error(ErrorCode::InvalidArgument, "tolerance max_rate must be > 0");
  }
  if (form == Form::Quantitative) {
    if (severity_floor.kind != Severity::Kind::Quantitative) {
      throw Error(ErrorCode::InvalidArgument, "quantitative tolerance needs a quantitative severity floor");
    }
    severity_floor.validate();
  } else if (scenario_label.empty()) {
    throw Error(ErrorCode::InvalidArgument, "scenario-bounded tolerance needs a scenario label");
  }
}

bool RiskTolerance::covers(const Severity& severity) const {
  if (form == Form::ScenarioBounded) {
    return severity.kind == Severity::Kind::Qualitative && severity.scenario_label == scenario_label;
  }
  return severity.kind == Severity::Kind::Quantitative && severity.unit == severity_floor.unit &&
         severity.magnitude >= severity_floor.magnitude;
}

double BudgetLedger::allocated() const {
  double sum = 0.0;
  for (const auto& [domain, share] : allocations) sum += share;
  return sum;
}

void BudgetLedger::validate() const {
  total.validate();
  for (const auto& [domain, share] : allocations) {
    if (!(share > 0.0 && std::isfinite(share))) {
      throw Error(ErrorCode::NonPositiveShare, domain);
    }
  }
  const double sum = allocated();
  if (sum > total.max_rate * (1.0 + kRelativeSlack)) {
    throw Error(ErrorCode::Oversubscribed,
                "allocated " + std::to_string(sum) + " > total " + std::to_string(total.max_rate));
  }
}

BudgetLedger allocate_budget(const RiskTolerance& total, const std::map<std::string, double>& shares,
                             const std::map<std::string, std::string>& rationale) {
  if (shares.empty()) throw Error(ErrorCode::InvalidArgument, "no shares to allocate");
  BudgetLedger ledger{total, shares, rationale};
  ledger.validate();
  return ledger;
}

ComplianceReport check_compliance(const BudgetLedger& ledger,
                                  const std::map<std::string, QuantifiedRisk>& residuals) {
  ComplianceReport report;
  for (const auto& [domain, share] : ledger.allocations) {
    if (residuals.count(domain) == 0) throw Error(ErrorCode::MissingResidual, domain);
  }
  bool all_pass = true;
  for (const auto& [domain, risk] : residuals) {
    auto alloc = ledger.allocations.find(domain);
    DomainCompliance row;
    row.allocated = alloc == ledger.allocations.end() ? 0.0 : alloc->second;
    row.residual = risk.rate;
    row.pass = risk.rate <= row.allocated;
    all_pass = all_pass && row.pass;
    report.aggregate_residual += risk.rate;
    report.per_domain.emplace(domain, row);
  }
  report.pass = all_pass && report.aggregate_residual <= ledger.total.max_rate;
  report.assumptions = {
      "residual rates add across risk domains (union bound)",
      "rates of multiple risk models for the same harm are summed",
      "risk models are quantified under independence of steps and basic events",
  };
  return report;
}

}  // namespace frm::tolerance
