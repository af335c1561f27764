#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace frm::riskmodel {

struct BasicEvent {
  std::string id;
  std::string description;
  // Exactly one of the two is set. Fault-tree quantification needs
  // per-demand probabilities; rates are accepted on input for documentation
  // but rejected by validate().
  std::optional<double> probability;
  std::optional<double> rate;

  bool operator==(const BasicEvent&) const = default;
};

enum class GateKind { And, Or, KOfN };

struct Gate {
  GateKind kind = GateKind::Or;
  int k = 0;  // only for KOfN
  std::vector<std::string> children;

  bool operator==(const Gate&) const = default;
};

// Coherent fault tree over independent basic events. `top` may name a gate
// or a basic event. Children may repeat and gates may be shared; both make
// the affected basic events "repeated" and are quantified exactly.
struct FaultTree {
  std::map<std::string, Gate> gates;
  std::string top;
  std::map<std::string, BasicEvent> basic_events;

  // Throws CyclicTree, UnknownEventId or InvalidModel.
  void validate() const;

  bool operator==(const FaultTree&) const = default;
};

using ProbabilityOverrides = std::map<std::string, double>;
using CutSet = std::set<std::string>;

// Exact top-event probability. Basic events reachable from the top along
// more than one path are conditioned on (2^r enumeration); the remaining
// structure is a tree over distinct events where gate algebra is exact.
double eval_fault_tree(const FaultTree& tree, const ProbabilityOverrides& overrides = {});

// Minimal cut sets by bottom-up expansion with superset elimination.
std::set<CutSet> minimal_cut_sets(const FaultTree& tree);

// Probability that at least k of independent events with probabilities `p`
// occur.
double at_least_k_of(const std::vector<double>& p, int k);

}  // namespace frm::riskmodel
