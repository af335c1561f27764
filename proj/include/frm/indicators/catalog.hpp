#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "frm/common/time.hpp"
#include "frm/riskmodel/tables.hpp"

namespace frm::indicators {

using riskmodel::KciProbabilityTable;
using riskmodel::KriProbabilityTable;

enum class KriKind { InternalCapability, ExternalEnvironment };

// KRI scales are always oriented so that higher values mean more risk.
struct KriScale {
  std::string unit;
  double lo = 0.0;
  double hi = 100.0;

  bool operator==(const KriScale&) const = default;
};

struct Kri {
  std::string id;
  std::string name;
  KriKind kind = KriKind::InternalCapability;
  KriScale scale;
  std::vector<double> thresholds;
  std::vector<KriProbabilityTable> tables;

  // Throws InvalidIndicator, or NonMonotoneTable for a table whose
  // probabilities fall as the KRI rises.
  void validate() const;

  bool operator==(const Kri&) const = default;
};

enum class MitigationType { Containment, Deployment, Assurance };

inline constexpr std::string_view kMeetsLevel = "meets";
inline constexpr std::string_view kFailsLevel = "fails";

// Either ordered levels (weakest first) or a continuous quantity where lower
// is better. A continuous KCI behaves as the two-level scale {fails, meets}
// split at `bound`.
struct KciMetric {
  enum class Kind { OrderedLevels, Continuous };

  Kind kind = Kind::OrderedLevels;
  std::vector<std::string> levels;
  std::string unit;
  double bound = 0.0;

  const std::vector<std::string>& level_order() const;
  bool operator==(const KciMetric&) const = default;
};

struct Kci {
  std::string id;
  std::string name;
  MitigationType mitigation_type = MitigationType::Containment;
  KciMetric metric;
  std::vector<KciProbabilityTable> tables;

  void validate() const;
  std::size_t level_index(std::string_view level) const;  // throws InvalidIndicator
  const std::string& weakest_level() const { return metric.level_order().front(); }

  bool operator==(const Kci&) const = default;
};

// What a rule requires of its KCI: a named level for ordered metrics, or an
// upper bound for continuous ones.
using KciRequirement = std::variant<std::string, double>;

struct IfThenRule {
  std::string id;
  std::string kri_id;
  double kri_threshold = 0.0;
  std::string kci_id;
  KciRequirement required;
  std::string linked_model;
  std::string tolerance_ref;  // budget domain
  std::string escalation_severity = "high";

  bool operator==(const IfThenRule&) const = default;
};

struct Elicitation {
  std::string method_notes;
  int effort_tier = 1;  // 1..3
  bool includes_posttraining_enhancements = false;

  bool operator==(const Elicitation&) const = default;
};

struct Measurement {
  std::string indicator_id;
  double value = 0.0;
  std::optional<std::string> level;  // ordered-level KCIs
  Timestamp timestamp;
  Elicitation elicitation;
  std::optional<double> effective_compute;  // FLOP, capability KRIs

  bool operator==(const Measurement&) const = default;
};

// All KRIs and KCIs known to the engine.
struct Catalog {
  std::map<std::string, Kri> kris;
  std::map<std::string, Kci> kcis;

  const Kri& kri(std::string_view id) const;  // throws NotFound
  const Kci& kci(std::string_view id) const;

  void validate() const;
  void validate_rule(const IfThenRule& rule) const;
  // Checks the value (and level) against the indicator's scale.
  void validate_measurement(const Measurement& m) const;

  // Tables keyed by table id, ready for riskmodel::IndicatorContext.
  std::map<std::string, KriProbabilityTable> kri_tables() const;
  std::map<std::string, KciProbabilityTable> kci_tables() const;
  riskmodel::IndicatorContext context() const;

  bool operator==(const Catalog&) const = default;
};

std::string_view to_string(KriKind kind);
KriKind parse_kri_kind(std::string_view name);
std::string_view to_string(MitigationType type);
MitigationType parse_mitigation_type(std::string_view name);

}  // namespace frm::indicators
