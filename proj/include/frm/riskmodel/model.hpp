#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "frm/riskmodel/event_tree.hpp"
#include "frm/riskmodel/fault_tree.hpp"
#include "frm/riskmodel/tables.hpp"
#include "frm/riskmodel/types.hpp"

namespace frm::riskmodel {

struct FixedProbability {
  double value = 0.0;
  bool operator==(const FixedProbability&) const = default;
};
struct KriTableRef {
  std::string table_id;
  bool operator==(const KriTableRef&) const = default;
};
struct KciTableRef {
  std::string table_id;
  bool operator==(const KciTableRef&) const = default;
};

using ProbabilitySource = std::variant<FixedProbability, KriTableRef, KciTableRef>;

struct ScenarioStep {
  std::string id;
  std::string description;
  ProbabilitySource source;

  bool operator==(const ScenarioStep&) const = default;
};

// Harm pathway as an ordered chain of conditional steps.
struct ScenarioChain {
  std::string id;
  std::string description;
  double initiating_frequency = 0.0;  // attempts per year
  std::vector<ScenarioStep> steps;
  Severity severity;

  void validate() const;

  bool operator==(const ScenarioChain&) const = default;
};

// Fault tree whose top event is demanded `demand_frequency` times a year.
struct FaultTreeModel {
  std::string id;
  std::string description;
  FaultTree tree;
  double demand_frequency = 1.0;
  Severity severity;

  bool operator==(const FaultTreeModel&) const = default;
};

// Event tree whose harm rate is the aggregate over leaves in the model's
// severity class.
struct EventTreeModel {
  std::string id;
  std::string description;
  EventTree tree;
  Severity severity;

  bool operator==(const EventTreeModel&) const = default;
};

struct RiskModel {
  std::string domain;
  std::variant<ScenarioChain, FaultTreeModel, EventTreeModel> body;

  const std::string& id() const;
  const Severity& severity() const;
  const ScenarioChain* chain() const { return std::get_if<ScenarioChain>(&body); }

  void validate() const;

  bool operator==(const RiskModel&) const = default;
};

// Table ids referenced by the chain's steps.
std::set<std::string> kri_tables_of(const ScenarioChain& chain);
std::set<std::string> kci_tables_of(const ScenarioChain& chain);

// Step probability with table lookups resolved from `ctx`. Throws
// UnresolvedStep when a table or the value it needs is absent.
double step_probability(const ScenarioStep& step, const IndicatorContext& ctx);

// initiating_frequency x product of step probabilities.
QuantifiedRisk chain_residual_rate(const ScenarioChain& chain, const IndicatorContext& ctx);

// Residual rate of any model kind. Tree models ignore the indicator context.
QuantifiedRisk quantify(const RiskModel& model, const IndicatorContext& ctx);

}  // namespace frm::riskmodel
