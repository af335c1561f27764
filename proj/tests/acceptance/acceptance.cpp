// One line per acceptance criterion; exit status is nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "properties.hpp"

namespace {

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<frm::test::PropertyResult()> run;
};

}  // namespace

int main() {
  using namespace frm::test;
  const std::vector<Criterion> criteria = {
      {"faa-anchor", 1, [] { return check_faa_anchor(); }},
      {"cyber1-anchor", 1, [] { return check_cyber1_anchor(); }},
      {"fault-tree-oracle", 60, [] { return check_fault_tree_oracle(500, 11); }},
      {"three-way-solver", 30, [] { return check_three_way(200, 12); }},
      {"rule-engine-oracle", 30, [] { return check_rule_engine(1000, 13); }},
      {"budget-ledger", 30, [] { return check_budget_ledger(5000, 14); }},
      {"audit-chain", 60, [] { return check_audit_chain(100, 50, 15); }},
      {"round-trip", 30, [] { return check_round_trip(100, 16); }},
      {"lifecycle-model-check", 60, [] { return check_lifecycle(10000, 17); }},
      {"forecast", 5, [] { return check_forecast(1000, 18); }},
      {"crash-safety", 120, [] { return check_crash_safety(60, 19); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    frm::test::PropertyResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.pass && secs > c.budget_seconds) r.fail("took longer than " + std::to_string(c.budget_seconds) + " s");
    failed += r.pass ? 0 : 1;
    std::printf("%s %-22s %8.3fs  %s\n", r.pass ? "PASS" : "FAIL", c.name, secs, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
