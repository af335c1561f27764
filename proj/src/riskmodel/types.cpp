#include "frm/riskmodel/types.hpp"

#include <cmath>

#include "frm/common/canonical.hpp"
#include "frm/common/error.hpp"

namespace frm::riskmodel {

Severity Severity::quantitative(double magnitude, std::string unit) {
  Severity s;
  s.kind = Kind::Quantitative;
  s.magnitude = magnitude;
  s.unit = std::move(unit);
  return s;
}

Severity Severity::qualitative(std::string scenario_label) {
  Severity s;
  s.kind = Kind::Qualitative;
  s.scenario_label = std::move(scenario_label);
  return s;
}

std::string Severity::class_key() const {
  if (kind == Kind::Qualitative) return "scenario:" + scenario_label;
  return canonical_dump(Json(magnitude)) + " " + unit;
}

void Severity::validate() const {
  if (kind == Kind::Quantitative && !(magnitude > 0.0 && std::isfinite(magnitude))) {
    throw Error(ErrorCode::InvalidModel, "quantitative severity magnitude must be > 0");
  }
}

}  // namespace frm::riskmodel
