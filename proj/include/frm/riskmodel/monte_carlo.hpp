#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "frm/riskmodel/model.hpp"

namespace frm::riskmodel {

struct Distribution {
  enum class Kind { Point, Uniform, Triangular, Beta, Lognormal };

  Kind kind = Kind::Point;
  // Point: a = value. Uniform: [a, b]. Triangular: a = lo, b = mode, c = hi.
  // Beta: a = alpha, b = beta. Lognormal: a = mu, b = sigma of log(x).
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  static Distribution point(double v) { return {Kind::Point, v, 0.0, 0.0}; }
  static Distribution uniform(double lo, double hi) { return {Kind::Uniform, lo, hi, 0.0}; }
  static Distribution triangular(double lo, double mode, double hi) {
    return {Kind::Triangular, lo, mode, hi};
  }
  static Distribution beta(double alpha, double beta) { return {Kind::Beta, alpha, beta, 0.0}; }
  static Distribution lognormal(double mu, double sigma) {
    return {Kind::Lognormal, mu, sigma, 0.0};
  }

  bool operator==(const Distribution&) const = default;
};

// Uncertain inputs keyed by id. For a scenario chain the keys are step ids
// and "initiating_frequency"; for a fault tree they are basic-event ids and
// "demand_frequency".
using UncertaintyMap = std::map<std::string, Distribution>;

inline constexpr const char* kInitiatingFrequencyKey = "initiating_frequency";
inline constexpr const char* kDemandFrequencyKey = "demand_frequency";

// Mean rate and percentile (2.5 / 97.5) interval over n seeded draws.
// Identical (model, uncertainty, n, seed) give bit-identical results.
QuantifiedRisk monte_carlo_rate(const RiskModel& model, const IndicatorContext& ctx,
                                const UncertaintyMap& uncertainty, std::size_t n,
                                std::uint64_t seed);

}  // namespace frm::riskmodel
