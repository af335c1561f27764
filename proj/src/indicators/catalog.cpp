#include "frm/indicators/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "frm/common/error.hpp"

namespace frm::indicators {
namespace {

const std::vector<std::string>& continuous_levels() {
  static const std::vector<std::string> levels = {std::string(kFailsLevel),
                                                  std::string(kMeetsLevel)};
  return levels;
}

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidIndicator, what);
}

}  // namespace

const std::vector<std::string>& KciMetric::level_order() const {
  return kind == Kind::Continuous ? continuous_levels() : levels;
}

void Kri::validate() const {
  if (id.empty()) invalid("KRI without id");
  if (!(scale.lo < scale.hi)) invalid(id + ": scale lo must be < hi");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] < scale.lo || thresholds[i] > scale.hi) invalid(id + ": threshold outside scale");
    if (i > 0 && !(thresholds[i] > thresholds[i - 1])) {
      invalid(id + ": thresholds must be strictly increasing");
    }
  }
  for (const auto& table : tables) {
    table.validate();
    if (table.kri_id != id) invalid(table.id + ": table belongs to " + table.kri_id);
    if (table.edges.front() != scale.lo || table.edges.back() > scale.hi) {
      invalid(table.id + ": bin edges must start at scale lo and stay within the scale");
    }
    if (!table.monotone()) throw Error(ErrorCode::NonMonotoneTable, table.id);
  }
}

void Kci::validate() const {
  if (id.empty()) invalid("KCI without id");
  if (metric.kind == KciMetric::Kind::OrderedLevels) {
    if (metric.levels.size() < 2) invalid(id + ": needs >= 2 levels");
    std::set<std::string> unique(metric.levels.begin(), metric.levels.end());
    if (unique.size() != metric.levels.size()) invalid(id + ": duplicate level");
  } else if (!std::isfinite(metric.bound)) {
    invalid(id + ": continuous bound must be finite");
  }
  for (const auto& table : tables) {
    table.validate();
    if (table.kci_id != id) invalid(table.id + ": table belongs to " + table.kci_id);
    if (table.levels != metric.level_order()) invalid(table.id + ": levels differ from the KCI's");
    if (!table.monotone()) throw Error(ErrorCode::NonMonotoneTable, table.id);
  }
}

std::size_t Kci::level_index(std::string_view level) const {
  const auto& order = metric.level_order();
  auto it = std::find(order.begin(), order.end(), level);
  if (it == order.end()) invalid(id + ": unknown level '" + std::string(level) + "'");
  return static_cast<std::size_t>(it - order.begin());
}

const Kri& Catalog::kri(std::string_view id) const {
  auto it = kris.find(std::string(id));
  if (it == kris.end()) throw Error(ErrorCode::NotFound, "KRI " + std::string(id));
  return it->second;
}

const Kci& Catalog::kci(std::string_view id) const {
  auto it = kcis.find(std::string(id));
  if (it == kcis.end()) throw Error(ErrorCode::NotFound, "KCI " + std::string(id));
  return it->second;
}

void Catalog::validate() const {
  std::set<std::string> table_ids;
  for (const auto& [id, k] : kris) {
    if (k.id != id) invalid("KRI key/id mismatch: " + id);
    k.validate();
    for (const auto& t : k.tables) {
      if (!table_ids.insert(t.id).second) invalid("duplicate table id " + t.id);
    }
  }
  for (const auto& [id, k] : kcis) {
    if (k.id != id) invalid("KCI key/id mismatch: " + id);
    if (kris.count(id) != 0) invalid("id used by both a KRI and a KCI: " + id);
    k.validate();
    for (const auto& t : k.tables) {
      if (!table_ids.insert(t.id).second) invalid("duplicate table id " + t.id);
    }
  }
}

void Catalog::validate_rule(const IfThenRule& rule) const {
  const Kri& r = kri(rule.kri_id);
  const Kci& c = kci(rule.kci_id);
  if (rule.kri_threshold < r.scale.lo || rule.kri_threshold > r.scale.hi) {
    invalid(rule.id + ": KRI threshold outside scale");
  }
  if (const auto* level = std::get_if<std::string>(&rule.required)) {
    if (c.metric.kind != KciMetric::Kind::OrderedLevels) {
      invalid(rule.id + ": continuous KCI needs a numeric bound");
    }
    c.level_index(*level);
  } else if (c.metric.kind != KciMetric::Kind::Continuous) {
    invalid(rule.id + ": ordered KCI needs a level");
  }
  if (rule.escalation_severity != "low" && rule.escalation_severity != "medium" &&
      rule.escalation_severity != "high") {
    invalid(rule.id + ": escalation severity must be low, medium or high");
  }
}

void Catalog::validate_measurement(const Measurement& m) const {
  if (m.elicitation.effort_tier < 1 || m.elicitation.effort_tier > 3) {
    invalid(m.indicator_id + ": effort tier must be 1..3");
  }
  if (auto it = kris.find(m.indicator_id); it != kris.end()) {
    const auto& scale = it->second.scale;
    if (!(m.value >= scale.lo && m.value <= scale.hi)) {
      invalid(m.indicator_id + ": value outside scale [" + std::to_string(scale.lo) + ", " +
              std::to_string(scale.hi) + "]");
    }
    if (m.effective_compute && !(*m.effective_compute > 0.0)) {
      invalid(m.indicator_id + ": effective compute must be > 0");
    }
    return;
  }
  if (auto it = kcis.find(m.indicator_id); it != kcis.end()) {
    const Kci& c = it->second;
    if (c.metric.kind == KciMetric::Kind::OrderedLevels) {
      if (!m.level) invalid(m.indicator_id + ": ordered KCI measurement needs a level");
      c.level_index(*m.level);
    } else if (!std::isfinite(m.value) || m.value < 0.0) {
      invalid(m.indicator_id + ": continuous value must be finite and >= 0");
    }
    return;
  }
  throw Error(ErrorCode::NotFound, "indicator " + m.indicator_id);
}

std::map<std::string, KriProbabilityTable> Catalog::kri_tables() const {
  std::map<std::string, KriProbabilityTable> out;
  for (const auto& [id, k] : kris) {
    for (const auto& t : k.tables) out.emplace(t.id, t);
  }
  return out;
}

std::map<std::string, KciProbabilityTable> Catalog::kci_tables() const {
  std::map<std::string, KciProbabilityTable> out;
  for (const auto& [id, k] : kcis) {
    for (const auto& t : k.tables) out.emplace(t.id, t);
  }
  return out;
}

riskmodel::IndicatorContext Catalog::context() const {
  riskmodel::IndicatorContext ctx;
  ctx.kri_tables = kri_tables();
  ctx.kci_tables = kci_tables();
  return ctx;
}

std::string_view to_string(KriKind kind) {
  return kind == KriKind::InternalCapability ? "internal_capability" : "external_environment";
}

KriKind parse_kri_kind(std::string_view name) {
  if (name == "internal_capability") return KriKind::InternalCapability;
  if (name == "external_environment") return KriKind::ExternalEnvironment;
  throw Error(ErrorCode::InvalidIndicator, "unknown KRI kind " + std::string(name));
}

std::string_view to_string(MitigationType type) {
  switch (type) {
    case MitigationType::Containment: return "containment";
    case MitigationType::Deployment: return "deployment";
    case MitigationType::Assurance: return "assurance";
  }
  return "containment";
}

MitigationType parse_mitigation_type(std::string_view name) {
  if (name == "containment") return MitigationType::Containment;
  if (name == "deployment") return MitigationType::Deployment;
  if (name == "assurance") return MitigationType::Assurance;
  throw Error(ErrorCode::InvalidIndicator, "unknown mitigation type " + std::string(name));
}

}  // namespace frm::indicators
