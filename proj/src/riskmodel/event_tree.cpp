#include "frm/riskmodel/event_tree.hpp"

#include <cmath>
#include <set>

#include "frm/common/error.hpp"

namespace frm::riskmodel {

void EventTree::validate() const {
  if (!(frequency >= 0.0 && std::isfinite(frequency))) {
    throw Error(ErrorCode::InvalidModel, "initiating frequency must be >= 0");
  }
  std::size_t expected_leaves = 1;
  for (std::size_t b = 0; b < branch_points.size(); ++b) {
    const auto& bp = branch_points[b];
    if (bp.outcomes.size() < 2 || bp.outcomes.size() != bp.probabilities.size()) {
      throw Error(ErrorCode::InvalidModel,
                  "branch point " + std::to_string(b) + " needs >= 2 outcomes with probabilities");
    }
    double sum = 0.0;
    for (double p : bp.probabilities) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::BranchProbabilitySumError,
                    "branch point " + std::to_string(b) + ": probability outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorCode::BranchProbabilitySumError,
                  "branch point " + std::to_string(b) + " sums to " + std::to_string(sum));
    }
    expected_leaves *= bp.outcomes.size();
  }
  if (leaves.size() != expected_leaves) {
    throw Error(ErrorCode::InvalidModel, "expected " + std::to_string(expected_leaves) +
                                             " leaves, got " + std::to_string(leaves.size()));
  }
  std::set<std::vector<std::size_t>> seen;
  for (const auto& leaf : leaves) {
    if (leaf.path.size() != branch_points.size()) {
      throw Error(ErrorCode::InvalidModel, "leaf path length differs from branch count");
    }
    for (std::size_t b = 0; b < leaf.path.size(); ++b) {
      if (leaf.path[b] >= branch_points[b].outcomes.size()) {
        throw Error(ErrorCode::InvalidModel, "leaf path outcome out of range");
      }
    }
    if (!seen.insert(leaf.path).second) throw Error(ErrorCode::InvalidModel, "duplicate leaf path");
    leaf.severity.validate();
  }
}

EventTreeResult eval_event_tree(const EventTree& tree) {
  tree.validate();
  EventTreeResult result;
  result.leaves.reserve(tree.leaves.size());
  for (const auto& leaf : tree.leaves) {
    double rate = tree.frequency;
    for (std::size_t b = 0; b < leaf.path.size(); ++b) {
      rate *= tree.branch_points[b].probabilities[leaf.path[b]];
    }
    result.leaves.push_back(QuantifiedRisk{rate, leaf.severity, std::nullopt});
    result.by_severity_class[leaf.severity.class_key()] += rate;
  }
  return result;
}

}  // namespace frm::riskmodel
