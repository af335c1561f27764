#pragma once

#include <string>
#include <string_view>

#include "frm/register/snapshot.hpp"

namespace frm::registry {

enum class DisclosureKind { RiskDisclosure, GovernanceDisclosure, IncidentReport };

std::string_view to_string(DisclosureKind kind);
DisclosureKind parse_disclosure_kind(std::string_view name);  // throws NotFound

// Half-open reporting interval [from, to).
struct Period {
  Timestamp from;
  Timestamp to;
};

struct Disclosure {
  DisclosureKind kind = DisclosureKind::RiskDisclosure;
  Period period;
  Json body;

  Json to_json() const;
};

// Deterministic for a given snapshot and period. Throws EmptyPeriod when
// `to` is not after `from`.
//  risk_disclosure: per-domain residual against allocation, with breach counts.
//  governance_disclosure: role assignments, separation checks, approval
//    policy and the culture checklist.
//  incident_report: one timeline per breach overlapping the period.
Disclosure generate_disclosure(DisclosureKind kind, const Period& period, const Snapshot& s,
                               const governance::GovernanceConfig& governance);

}  // namespace frm::registry
