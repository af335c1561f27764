#include "frm/indicators/rules.hpp"

#include <algorithm>

#include "frm/common/canonical.hpp"
#include "frm/common/error.hpp"

namespace frm::indicators {
namespace {

// Latest measurement of `id` at or before `as_of`; later list position wins
// ties so that corrections recorded with the same timestamp take effect.
const Measurement* latest(const std::vector<Measurement>& history, const std::string& id,
                          Timestamp as_of) {
  const Measurement* best = nullptr;
  for (const auto& m : history) {
    if (m.indicator_id != id || m.timestamp > as_of) continue;
    if (best == nullptr || m.timestamp >= best->timestamp) best = &m;
  }
  return best;
}

}  // namespace

Timestamp RecencyWindow::start() const {
  if (weights_changed_at) return *weights_changed_at;
  return add_days(as_of, -kDefaultRecencyDays);
}

double effective_kri_value(const Kri& kri, const std::vector<Measurement>& history, double margin,
                           const RecencyWindow& window) {
  if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "margin must be >= 0");
  std::optional<double> best;
  for (const auto& m : history) {
    if (m.indicator_id != kri.id || !window.contains(m.timestamp)) continue;
    const double v =
        m.value + (m.elicitation.includes_posttraining_enhancements ? 0.0 : margin);
    best = best ? std::max(*best, v) : v;
  }
  if (!best) throw Error(ErrorCode::NoMeasurements, kri.id);
  return std::min(*best, kri.scale.hi);
}

std::optional<std::string> current_kci_level(const Kci& kci, const std::vector<Measurement>& history,
                                             Timestamp as_of) {
  const Measurement* m = latest(history, kci.id, as_of);
  if (m == nullptr) return std::nullopt;
  if (kci.metric.kind == KciMetric::Kind::OrderedLevels) return m->level;
  return std::string(m->value <= kci.metric.bound ? kMeetsLevel : kFailsLevel);
}

bool requirement_met(const Kci& kci, const KciRequirement& required,
                     const std::vector<Measurement>& history, Timestamp as_of) {
  const Measurement* m = latest(history, kci.id, as_of);
  if (m == nullptr) return false;
  if (const auto* level = std::get_if<std::string>(&required)) {
    if (!m->level) return false;
    return kci.level_index(*m->level) >= kci.level_index(*level);
  }
  return m->value <= std::get<double>(required);
}

std::string_view to_string(RuleState state) {
  switch (state) {
    case RuleState::NotTriggered: return "not_triggered";
    case RuleState::Satisfied: return "satisfied";
    case RuleState::Breached: return "breached";
  }
  return "not_triggered";
}

RuleState parse_rule_state(std::string_view name) {
  if (name == "not_triggered") return RuleState::NotTriggered;
  if (name == "satisfied") return RuleState::Satisfied;
  if (name == "breached") return RuleState::Breached;
  throw Error(ErrorCode::SchemaViolation, "unknown rule state " + std::string(name));
}

RuleEvaluation evaluate_rules(const Catalog& catalog, const std::vector<IfThenRule>& rules,
                              const std::vector<Measurement>& history, double margin,
                              const RecencyWindow& window) {
  RuleEvaluation out;
  for (const auto& rule : rules) {
    const Kri& kri = catalog.kri(rule.kri_id);
    const Kci& kci = catalog.kci(rule.kci_id);
    RuleStatus status;
    status.rule_id = rule.id;
    status.evaluated_at = window.as_of;

    const bool has_kri = std::any_of(history.begin(), history.end(), [&](const Measurement& m) {
      return m.indicator_id == kri.id && window.contains(m.timestamp);
    });
    if (has_kri) {
      status.kri_value = effective_kri_value(kri, history, margin, window);
      status.kri_triggered = *status.kri_value >= rule.kri_threshold;
    }

    const Measurement* kci_m = latest(history, kci.id, window.as_of);
    if (kci_m != nullptr) {
      status.kci_observed = kci_m->level ? *kci_m->level : canonical_dump(Json(kci_m->value));
      status.kci_met = requirement_met(kci, rule.required, history, window.as_of);
    } else if (status.kri_triggered) {
      throw Error(ErrorCode::MissingKciMeasurement, rule.id + " needs a measurement of " + kci.id);
    }

    if (!status.kri_triggered) {
      status.state = RuleState::NotTriggered;
    } else if (status.kci_met) {
      status.state = RuleState::Satisfied;
    } else {
      status.state = RuleState::Breached;
      status.required_action = "hold";
      out.escalations.push_back({rule.id, rule.escalation_severity});
    }
    out.statuses.push_back(std::move(status));
  }
  return out;
}

}  // namespace frm::indicators
