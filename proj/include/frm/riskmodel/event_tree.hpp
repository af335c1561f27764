#pragma once

#include <map>
#include <string>
#include <vector>

#include "frm/riskmodel/types.hpp"

namespace frm::riskmodel {

struct BranchPoint {
  std::string description;
  std::vector<std::string> outcomes;
  std::vector<double> probabilities;

  bool operator==(const BranchPoint&) const = default;
};

struct EventTreeLeaf {
  // One outcome index per branch point, in branch-point order.
  std::vector<std::size_t> path;
  Severity severity;

  bool operator==(const EventTreeLeaf&) const = default;
};

struct EventTree {
  std::string initiating_description;
  double frequency = 0.0;  // initiating events per year
  std::vector<BranchPoint> branch_points;
  std::vector<EventTreeLeaf> leaves;

  // Throws BranchProbabilitySumError or InvalidModel.
  void validate() const;

  bool operator==(const EventTree&) const = default;
};

struct EventTreeResult {
  std::vector<QuantifiedRisk> leaves;                 // same order as tree.leaves
  std::map<std::string, double> by_severity_class;    // Severity::class_key -> rate
};

EventTreeResult eval_event_tree(const EventTree& tree);

}  // namespace frm::riskmodel
