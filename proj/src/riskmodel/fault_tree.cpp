#include "frm/riskmodel/fault_tree.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

#include "frm/common/error.hpp"

namespace frm::riskmodel {
namespace {

constexpr std::size_t kMaxRepeatedEvents = 24;

enum class Mark { None, Active, Done };

// Depth-first post-order over gates reachable from `root`; throws on cycles.
void visit(const FaultTree& tree, const std::string& id, std::map<std::string, Mark>& marks,
           std::vector<std::string>& post_order) {
  if (tree.basic_events.count(id) != 0) return;
  auto gate_it = tree.gates.find(id);
  if (gate_it == tree.gates.end()) throw Error(ErrorCode::UnknownEventId, id);
  Mark& mark = marks[id];
  if (mark == Mark::Done) return;
  if (mark == Mark::Active) throw Error(ErrorCode::CyclicTree, "cycle through gate " + id);
  mark = Mark::Active;
  for (const auto& child : gate_it->second.children) visit(tree, child, marks, post_order);
  marks[id] = Mark::Done;
  post_order.push_back(id);
}

std::vector<std::string> gates_post_order(const FaultTree& tree) {
  std::map<std::string, Mark> marks;
  std::vector<std::string> order;
  visit(tree, tree.top, marks, order);
  // Unreachable gates still have to be well formed.
  for (const auto& [id, gate] : tree.gates) visit(tree, id, marks, order);
  return order;
}

std::vector<std::string> reachable_post_order(const FaultTree& tree) {
  std::map<std::string, Mark> marks;
  std::vector<std::string> order;
  visit(tree, tree.top, marks, order);
  return order;
}

// Number of distinct top-down paths reaching each node, saturated at 2.
std::map<std::string, int> path_counts(const FaultTree& tree,
                                       const std::vector<std::string>& post_order) {
  std::map<std::string, int> count;
  count[tree.top] = 1;
  for (auto it = post_order.rbegin(); it != post_order.rend(); ++it) {
    const int here = count[*it];
    if (here == 0) continue;
    for (const auto& child : tree.gates.at(*it).children) {
      count[child] = std::min(2, count[child] + here);
    }
  }
  return count;
}

std::set<CutSet> minimize(std::vector<CutSet> sets) {
  std::sort(sets.begin(), sets.end(), [](const CutSet& a, const CutSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<CutSet> kept;
  for (auto& candidate : sets) {
    const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const CutSet& k) {
      return std::includes(candidate.begin(), candidate.end(), k.begin(), k.end());
    });
    if (!dominated) kept.push_back(std::move(candidate));
  }
  return {kept.begin(), kept.end()};
}

std::set<CutSet> cross(const std::set<CutSet>& a, const std::set<CutSet>& b) {
  std::vector<CutSet> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      CutSet merged = x;
      merged.insert(y.begin(), y.end());
      out.push_back(std::move(merged));
    }
  }
  return minimize(std::move(out));
}

}  // namespace

double at_least_k_of(const std::vector<double>& p, int k) {
  // dist[j] = P(exactly j of the events seen so far occur)
  std::vector<double> dist(p.size() + 1, 0.0);
  dist[0] = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j > 0; --j) {
      dist[j] = dist[j] * (1.0 - p[i]) + dist[j - 1] * p[i];
    }
    dist[0] *= 1.0 - p[i];
  }
  double total = 0.0;
  for (std::size_t j = static_cast<std::size_t>(std::max(k, 0)); j < dist.size(); ++j) {
    total += dist[j];
  }
  return std::clamp(total, 0.0, 1.0);
}

void FaultTree::validate() const {
  if (gates.count(top) == 0 && basic_events.count(top) == 0) {
    throw Error(ErrorCode::UnknownEventId, "top '" + top + "'");
  }
  for (const auto& [id, event] : basic_events) {
    if (event.id != id) throw Error(ErrorCode::InvalidModel, "basic event key/id mismatch: " + id);
    if (gates.count(id) != 0) throw Error(ErrorCode::InvalidModel, "id used twice: " + id);
    if (event.probability.has_value() == event.rate.has_value()) {
      throw Error(ErrorCode::InvalidModel, "basic event " + id + " needs exactly one of probability/rate");
    }
    if (!event.probability) {
      throw Error(ErrorCode::InvalidModel, "basic event " + id + " carries a rate; fault trees need probabilities");
    }
    if (!(*event.probability >= 0.0 && *event.probability <= 1.0)) {
      throw Error(ErrorCode::InvalidModel, "basic event " + id + " probability outside [0,1]");
    }
  }
  for (const auto& [id, gate] : gates) {
    if (gate.children.empty()) throw Error(ErrorCode::InvalidModel, "gate " + id + " has no children");
    if (gate.kind == GateKind::KOfN &&
        (gate.k < 1 || gate.k > static_cast<int>(gate.children.size()))) {
      throw Error(ErrorCode::InvalidModel, "gate " + id + ": k out of range");
    }
  }
  gates_post_order(*this);
}

double eval_fault_tree(const FaultTree& tree, const ProbabilityOverrides& overrides) {
  tree.validate();
  std::map<std::string, double> prob;
  for (const auto& [id, event] : tree.basic_events) prob[id] = *event.probability;
  for (const auto& [id, value] : overrides) {
    auto it = prob.find(id);
    if (it == prob.end()) throw Error(ErrorCode::UnknownEventId, id);
    if (!(value >= 0.0 && value <= 1.0)) {
      throw Error(ErrorCode::InvalidModel, "override for " + id + " outside [0,1]");
    }
    it->second = value;
  }
  if (tree.basic_events.count(tree.top) != 0) return prob.at(tree.top);

  const auto order = reachable_post_order(tree);
  const auto counts = path_counts(tree, order);
  std::vector<std::string> repeated;
  for (const auto& [id, c] : counts) {
    if (c >= 2 && tree.basic_events.count(id) != 0) repeated.push_back(id);
  }
  if (repeated.size() > kMaxRepeatedEvents) {
    throw Error(ErrorCode::InvalidModel, "too many repeated basic events for exact evaluation");
  }

  std::map<std::string, double> conditioned = prob;
  std::map<std::string, double> gate_value;
  std::vector<double> child_p;
  double total = 0.0;
  const std::uint64_t states = std::uint64_t{1} << repeated.size();
  for (std::uint64_t mask = 0; mask < states; ++mask) {
    double weight = 1.0;
    for (std::size_t i = 0; i < repeated.size(); ++i) {
      const bool on = (mask >> i) & 1U;
      const double p = prob.at(repeated[i]);
      weight *= on ? p : 1.0 - p;
      conditioned[repeated[i]] = on ? 1.0 : 0.0;
    }
    if (weight == 0.0) continue;
    for (const auto& id : order) {
      const Gate& gate = tree.gates.at(id);
      child_p.clear();
      for (const auto& child : gate.children) {
        child_p.push_back(tree.gates.count(child) != 0 ? gate_value.at(child)
                                                       : conditioned.at(child));
      }
      double value = 0.0;
      switch (gate.kind) {
        case GateKind::And: {
          value = 1.0;
          for (double p : child_p) value *= p;
          break;
        }
        case GateKind::Or: {
          double none = 1.0;
          for (double p : child_p) none *= 1.0 - p;
          value = 1.0 - none;
          break;
        }
        case GateKind::KOfN:
          value = at_least_k_of(child_p, gate.k);
          break;
      }
      gate_value[id] = value;
    }
    total += weight * gate_value.at(tree.top);
  }
  return std::clamp(total, 0.0, 1.0);
}

std::set<CutSet> minimal_cut_sets(const FaultTree& tree) {
  tree.validate();
  if (tree.basic_events.count(tree.top) != 0) return {{tree.top}};

  std::map<std::string, std::set<CutSet>> cuts;
  const auto cuts_of = [&](const std::string& id) -> std::set<CutSet> {
    if (tree.basic_events.count(id) != 0) return {{id}};
    return cuts.at(id);
  };

  for (const auto& id : reachable_post_order(tree)) {
    const Gate& gate = tree.gates.at(id);
    std::set<CutSet> result;
    switch (gate.kind) {
      case GateKind::Or: {
        std::vector<CutSet> all;
        for (const auto& child : gate.children) {
          const auto c = cuts_of(child);
          all.insert(all.end(), c.begin(), c.end());
        }
        result = minimize(std::move(all));
        break;
      }
      case GateKind::And: {
        result = {CutSet{}};
        for (const auto& child : gate.children) result = cross(result, cuts_of(child));
        break;
      }
      case GateKind::KOfN: {
        // OR over every k-subset of children of the AND of that subset.
        const std::size_t n = gate.children.size();
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + gate.k, true);
        std::vector<CutSet> all;
        do {
          std::set<CutSet> combo = {CutSet{}};
          for (std::size_t i = 0; i < n; ++i) {
            if (pick[i]) combo = cross(combo, cuts_of(gate.children[i]));
          }
          all.insert(all.end(), combo.begin(), combo.end());
        } while (std::prev_permutation(pick.begin(), pick.end()));
        result = minimize(std::move(all));
        break;
      }
    }
    cuts[id] = std::move(result);
  }
  return cuts.at(tree.top);
}

}  // namespace frm::riskmodel
