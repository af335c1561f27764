#include "frm/common/audit_record.hpp"

#include "frm/common/error.hpp"

namespace frm {

std::string_view to_string(AuditKind kind) {
  switch (kind) {
    case AuditKind::Measurement: return "measurement";
    case AuditKind::RuleEval: return "rule_eval";
    case AuditKind::Exclusion: return "exclusion";
    case AuditKind::Gate: return "gate";
    case AuditKind::Approval: return "approval";
    case AuditKind::Escalation: return "escalation";
    case AuditKind::Edit: return "edit";
  }
  return "edit";
}

AuditKind parse_audit_kind(std::string_view name) {
  for (auto k : {AuditKind::Measurement, AuditKind::RuleEval, AuditKind::Exclusion,
                 AuditKind::Gate, AuditKind::Approval, AuditKind::Escalation, AuditKind::Edit}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::SchemaViolation, "unknown audit kind " + std::string(name));
}

}  // namespace frm
