#pragma once

#include <optional>
#include <string>
#include <utility>

namespace frm::riskmodel {

// Harm magnitude attached to a scenario or leaf. Quantitative severities carry
// a positive magnitude in some unit (USD, casualties); qualitative ones only
// name the scenario they bound.
struct Severity {
  enum class Kind { Quantitative, Qualitative };

  Kind kind = Kind::Qualitative;
  double magnitude = 0.0;
  std::string unit;
  std::string scenario_label;

  static Severity quantitative(double magnitude, std::string unit);
  static Severity qualitative(std::string scenario_label);

  // Stable key used to group leaves and match tolerances, e.g. "5e+08 USD" or
  // "scenario:critical infrastructure".
  std::string class_key() const;
  void validate() const;

  bool operator==(const Severity&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Interval&) const = default;
};

// Expected harm events per year at the given severity.
struct QuantifiedRisk {
  double rate = 0.0;
  Severity severity;
  std::optional<Interval> ci95;

  bool operator==(const QuantifiedRisk&) const = default;
};

}  // namespace frm::riskmodel
