#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frm/riskmodel/model.hpp"

namespace frm::indicators {

// Result of fixing tolerance and KRI value and solving for the KCI. `level`
// is empty when even the strongest level leaves the rate above tolerance.
struct MinKciSolution {
  std::string kci_id;
  std::optional<std::string> level;
  double rate_at_level = 0.0;                  // rate at `level` when feasible
  std::vector<std::string> levels;             // weakest first
};

// Result of fixing tolerance and KCI level and solving for the KRI: the
// greatest KRI value such that every value below it keeps the chain within
// tolerance. Empty when the lowest bin already exceeds the tolerance; the
// scale maximum when no bin does.
struct MaxKriSolution {
  std::string kri_id;
  std::optional<double> threshold;
};

// The chain must depend on exactly one KCI (through one or more KCI tables)
// and its tables must be monotone; other inputs are taken from `ctx`.
// Throws NonMonotoneTable, InvalidArgument, UnresolvedStep.
MinKciSolution solve_min_kci(const riskmodel::ScenarioChain& chain,
                             const riskmodel::IndicatorContext& ctx, double tolerance_rate);

// Same, with `kri_value` assigned to the chain's single KRI.
MinKciSolution solve_min_kci(const riskmodel::ScenarioChain& chain,
                             riskmodel::IndicatorContext ctx, double tolerance_rate,
                             double kri_value);

// The chain must depend on exactly one KRI; `scale_hi` is that KRI's scale
// maximum.
MaxKriSolution solve_max_kri(const riskmodel::ScenarioChain& chain,
                             riskmodel::IndicatorContext ctx, double tolerance_rate,
                             const std::string& kci_level, double scale_hi);

}  // namespace frm::indicators
