#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "frm/common/canonical.hpp"

namespace frm {

enum class AuditKind { Measurement, RuleEval, Exclusion, Gate, Approval, Escalation, Edit };

std::string_view to_string(AuditKind kind);
AuditKind parse_audit_kind(std::string_view name);

// An effect an operation wants recorded. The writer folds the records of one
// request into a single hash-chained audit event.
struct AuditRecord {
  AuditKind kind = AuditKind::Edit;
  std::string actor;
  Json body;
};

using AuditBuffer = std::vector<AuditRecord>;

}  // namespace frm
