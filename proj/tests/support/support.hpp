#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "frm/gateway/engine.hpp"
#include "frm/indicators/catalog.hpp"
#include "frm/indicators/rules.hpp"
#include "frm/riskmodel/fault_tree.hpp"
#include "frm/riskmodel/model.hpp"

namespace frm::test {

using Rng = std::mt19937_64;

std::filesystem::path fixtures_dir();
std::string fixture_text(const std::string& name);

// Deleted on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

Timestamp at(const std::string& text);

// --- CYBER-1 ---------------------------------------------------------------

indicators::Catalog cyber1_catalog();
riskmodel::ScenarioChain cyber1_chain();
riskmodel::IndicatorContext cyber1_context(double cybench, const std::string& level);

gateway::Config fixture_config();
// Memory engine with the CYBER-1 import, budget and register entry applied.
std::unique_ptr<gateway::Engine> cyber1_engine(gateway::Clock clock);

gateway::Request post(const std::string& path, const Json& body,
                      std::map<std::string, std::string> query = {});
gateway::Request get(const std::string& path, std::map<std::string, std::string> query = {});

// --- fault trees -------------------------------------------------------------

riskmodel::FaultTree random_fault_tree(Rng& rng, int max_events, int max_gates);

// Sum over all 2^n joint outcomes of the basic events.
double enumerate_top_probability(const riskmodel::FaultTree& tree);
// Every subset whose occurrence alone triggers the top event, reduced to the
// minimal ones.
std::set<riskmodel::CutSet> brute_force_cut_sets(const riskmodel::FaultTree& tree);
bool top_occurs(const riskmodel::FaultTree& tree, const std::set<std::string>& occurred);

// --- monotone chains ---------------------------------------------------------

struct ChainFixture {
  riskmodel::ScenarioChain chain;
  riskmodel::IndicatorContext ctx;  // tables only
  std::string kri_table;
  std::string kci_table;
  double scale_hi = 100.0;
};

ChainFixture random_chain_fixture(Rng& rng);

// Chain rate computed straight from the tables, in step order.
double oracle_rate(const ChainFixture& f, double kri_value, const std::string& level);
// First level (weakest first) meeting the tolerance, by linear scan.
std::optional<std::string> oracle_min_kci(const ChainFixture& f, double tolerance, double kri_value);
// Lower edge of the first KRI bin exceeding the tolerance at `level`.
std::optional<double> oracle_max_kri(const ChainFixture& f, double tolerance, const std::string& level);

// --- rule histories ----------------------------------------------------------

struct RuleWorld {
  indicators::Catalog catalog;
  std::vector<indicators::IfThenRule> rules;
};

RuleWorld random_rule_world(Rng& rng);
indicators::Measurement random_measurement(Rng& rng, const RuleWorld& world, Timestamp around);

struct OracleStatus {
  bool triggered = false;
  bool met = false;
  std::optional<double> kri_value;
};

// Independent re-evaluation; empty when the engine must reject the batch
// because a triggered rule has no KCI measurement.
std::optional<std::vector<OracleStatus>> oracle_evaluate(const RuleWorld& world,
                                                         const std::vector<indicators::Measurement>& history,
                                                         double margin, Timestamp as_of,
                                                         std::optional<Timestamp> weights_changed_at);

// --- snapshots ---------------------------------------------------------------

// A register touching every section of the document, including unknown
// fields that must survive a round trip.
registry::Snapshot random_snapshot(Rng& rng);

}  // namespace frm::test
