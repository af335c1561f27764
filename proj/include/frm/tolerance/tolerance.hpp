#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "frm/riskmodel/types.hpp"

namespace frm::tolerance {

using riskmodel::QuantifiedRisk;
using riskmodel::Severity;

enum class RateUnit { FlightHour, PlaneYear, Year, Month };

RateUnit parse_rate_unit(std::string_view name);  // throws UnknownUnit
std::string_view to_string(RateUnit unit);

inline constexpr double kHoursPerYear = 8760.0;

// Converts an event rate to events per year. A plane year is one aircraft
// in service for a year, so per-plane-year rates are already annual and
// per-flight-hour rates scale by `hours_per_year`.
double normalize_rate(double value, RateUnit per_unit, double hours_per_year = kHoursPerYear);
double normalize_rate(double value, std::string_view per_unit,
                      double hours_per_year = kHoursPerYear);

// Mean operating years per event for a per-year rate, rounded to the nearest
// whole year.
long long years_per_event(double rate_per_year);

struct RiskTolerance {
  enum class Form { Quantitative, ScenarioBounded };

  Form form = Form::Quantitative;
  double max_rate = 0.0;    // events per year
  Severity severity_floor;  // Quantitative form
  std::string scenario_label;  // ScenarioBounded form
  std::string basis_note;

  static RiskTolerance quantitative(double max_rate, Severity floor, std::string basis_note = {});
  static RiskTolerance scenario_bounded(std::string label, double max_rate,
                                        std::string basis_note = {});

  void validate() const;
  // Whether a model with this severity counts against the tolerance.
  bool covers(const Severity& severity) const;

  bool operator==(const RiskTolerance&) const = default;
};

struct BudgetLedger {
  RiskTolerance total;
  std::map<std::string, double> allocations;  // domain -> events per year
  std::map<std::string, std::string> rationale;

  double allocated() const;
  // Throws NonPositiveShare or Oversubscribed.
  void validate() const;

  bool operator==(const BudgetLedger&) const = default;
};

BudgetLedger allocate_budget(const RiskTolerance& total, const std::map<std::string, double>& shares,
                             const std::map<std::string, std::string>& rationale = {});

struct DomainCompliance {
  double allocated = 0.0;
  double residual = 0.0;
  bool pass = false;
};

struct ComplianceReport {
  std::map<std::string, DomainCompliance> per_domain;
  double aggregate_residual = 0.0;
  bool pass = false;
  std::vector<std::string> assumptions;
};

// Residual domains absent from the ledger are reported with a zero
// allocation; ledger domains without a residual are an error.
ComplianceReport check_compliance(const BudgetLedger& ledger,
                                  const std::map<std::string, QuantifiedRisk>& residuals);

}  // namespace frm::tolerance
