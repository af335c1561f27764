#pragma once

#include <cstdint>
#include <string>

namespace frm::test {

struct PropertyResult {
  bool pass = true;
  std::string detail;  // counts on success, the first counterexample on failure

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// Whole-system checks shared by the acceptance binary and the unit suites.
PropertyResult check_faa_anchor();
PropertyResult check_cyber1_anchor();
PropertyResult check_fault_tree_oracle(int trees, std::uint64_t seed);
PropertyResult check_three_way(int fixtures, std::uint64_t seed);
PropertyResult check_rule_engine(int histories, std::uint64_t seed);
PropertyResult check_budget_ledger(int trials, std::uint64_t seed);
PropertyResult check_audit_chain(int events, int sequences, std::uint64_t seed);
PropertyResult check_round_trip(int snapshots, std::uint64_t seed);
PropertyResult check_lifecycle(int sequences, std::uint64_t seed);
PropertyResult check_forecast(int datasets, std::uint64_t seed);
PropertyResult check_crash_safety(int rounds, std::uint64_t seed);

}  // namespace frm::test
