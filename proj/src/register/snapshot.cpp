#include "frm/register/snapshot.hpp"

namespace frm::registry {

std::vector<indicators::IfThenRule> Snapshot::rule_list() const {
  std::vector<indicators::IfThenRule> out;
  out.reserve(rules.size());
  for (const auto& [id, r] : rules) out.push_back(r);
  return out;
}

const governance::EscalationEvent* Snapshot::find_escalation(const std::string& id) const {
  for (const auto& e : escalations) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

governance::EscalationEvent* Snapshot::find_escalation(const std::string& id) {
  for (auto& e : escalations) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

}  // namespace frm::registry
