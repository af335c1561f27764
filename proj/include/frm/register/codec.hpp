#pragma once

#include <map>
#include <string>
#include <string_view>

#include "frm/common/canonical.hpp"
#include "frm/register/snapshot.hpp"

namespace frm::registry {

// Destination for unknown fields met while decoding; null discards them.
using ExtraSink = std::map<std::string, Json>*;

Json encode(const riskmodel::Severity& s);
riskmodel::Severity decode_severity(const Json& j, const std::string& path);
Json encode(const riskmodel::QuantifiedRisk& q);
riskmodel::QuantifiedRisk decode_quantified(const Json& j, const std::string& path);

Json encode(const riskmodel::RiskModel& m);
riskmodel::RiskModel decode_model(const Json& j, const std::string& path, ExtraSink extras = nullptr);

Json encode(const tolerance::RiskTolerance& t);
tolerance::RiskTolerance decode_tolerance(const Json& j, const std::string& path);
Json encode(const tolerance::BudgetLedger& l);
tolerance::BudgetLedger decode_ledger(const Json& j, const std::string& path);

Json encode(const indicators::Kri& k);
indicators::Kri decode_kri(const Json& j, const std::string& path, ExtraSink extras = nullptr);
Json encode(const indicators::Kci& k);
indicators::Kci decode_kci(const Json& j, const std::string& path, ExtraSink extras = nullptr);
Json encode(const indicators::IfThenRule& r);
indicators::IfThenRule decode_rule(const Json& j, const std::string& path, ExtraSink extras = nullptr);
Json encode(const indicators::Measurement& m);
indicators::Measurement decode_measurement(const Json& j, const std::string& path,
                                           ExtraSink extras = nullptr, const std::string& key = {});
Json encode(const indicators::RuleStatus& s);

Json encode(const governance::Role& r);
governance::Role decode_role(const Json& j, const std::string& path);
Json encode(const governance::EscalationEvent& e);
Json encode(const governance::GovernanceConfig& g);
governance::GovernanceConfig decode_governance(const Json& j, const std::string& path);

Json encode(const identification::Finding& f);
Json encode(const identification::RiskDomainEntry& d);

Json encode(const RegisterEntry& e);
Json encode(const lifecycle::LifecycleState& s);

Json encode(const Snapshot& s);
Snapshot decode_snapshot(const Json& j);

// Canonical register document bytes and back. import(export(s)) == s.
std::string export_register(const Snapshot& s);
Snapshot import_register(std::string_view document);

}  // namespace frm::registry
