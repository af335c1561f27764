#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "frm/common/error.hpp"
#include "frm/register/codec.hpp"

namespace frm::test {

namespace fs = std::filesystem;

fs::path fixtures_dir() { return FRM_FIXTURES_DIR; }

std::string fixture_text(const std::string& name) { return gateway::read_file(fixtures_dir() / name); }

TempDir::TempDir() {
  static std::uint64_t counter = 0;
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("frm-test-" + std::to_string(rd()) + "-" + std::to_string(++counter));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Timestamp at(const std::string& text) { return parse_timestamp(text); }

// --- CYBER-1 ---------------------------------------------------------------

namespace {

Json cyber1_document() { return canonical_parse(fixture_text("cyber1.json")); }

void expect_ok(const gateway::Response& res, const std::string& what) {
  if (!res.ok()) throw std::runtime_error(what + " failed: " + res.text());
}

}  // namespace

indicators::Catalog cyber1_catalog() {
  const Json doc = cyber1_document();
  indicators::Catalog c;
  for (const auto& k : doc.at("kris")) {
    auto kri = registry::decode_kri(k, "");
    c.kris[kri.id] = kri;
  }
  for (const auto& k : doc.at("kcis")) {
    auto kci = registry::decode_kci(k, "");
    c.kcis[kci.id] = kci;
  }
  c.validate();
  return c;
}

riskmodel::ScenarioChain cyber1_chain() {
  const Json doc = cyber1_document();
  return *registry::decode_model(doc.at("models").at(0), "").chain();
}

riskmodel::IndicatorContext cyber1_context(double cybench, const std::string& level) {
  auto ctx = cyber1_catalog().context();
  ctx.kri_values["cybench"] = cybench;
  ctx.kci_levels["security-level"] = level;
  return ctx;
}

gateway::Config fixture_config() { return gateway::decode_config(canonical_parse(fixture_text("config.json"))); }

gateway::Request post(const std::string& path, const Json& body, std::map<std::string, std::string> query) {
  return gateway::Request{"POST", path, std::move(query), canonical_dump(body)};
}

gateway::Request get(const std::string& path, std::map<std::string, std::string> query) {
  return gateway::Request{"GET", path, std::move(query), ""};
}

std::unique_ptr<gateway::Engine> cyber1_engine(gateway::Clock clock) {
  const auto config = fixture_config();
  auto engine = std::make_unique<gateway::Engine>(gateway::empty_snapshot(config), config, std::move(clock));
  expect_ok(engine->handle(post("/v1/import", cyber1_document())), "import");
  expect_ok(engine->handle(post("/v1/budget", canonical_parse(fixture_text("cyber1-budget.json")))), "budget");
  expect_ok(engine->handle(post("/v1/risks", canonical_parse(fixture_text("cyber1-entry.json")))), "entry");
  return engine;
}

// --- fault trees -------------------------------------------------------------

riskmodel::FaultTree random_fault_tree(Rng& rng, int max_events, int max_gates) {
  using riskmodel::GateKind;
  std::uniform_int_distribution<int> n_events(1, max_events);
  std::uniform_int_distribution<int> n_gates(1, max_gates);
  std::uniform_real_distribution<double> prob(0.01, 0.99);
  const int n = n_events(rng);
  const int g = n_gates(rng);

  riskmodel::FaultTree t;
  for (int i = 0; i < n; ++i) {
    riskmodel::BasicEvent e;
    e.id = "e" + std::to_string(i);
    e.probability = prob(rng);
    t.basic_events[e.id] = e;
  }
  for (int i = g - 1; i >= 0; --i) {
    // Children come from the events and from gates with a larger index, so
    // the graph is acyclic; shared children arise naturally.
    std::vector<std::string> pool;
    for (int j = 0; j < n; ++j) pool.push_back("e" + std::to_string(j));
    for (int j = i + 1; j < g; ++j) pool.push_back("g" + std::to_string(j));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<int> n_children(1, 4);
    riskmodel::Gate gate;
    const int c = n_children(rng);
    for (int k = 0; k < c; ++k) gate.children.push_back(pool[pick(rng)]);
    // Make sure the next gate is reachable so deeper structure is exercised.
    if (i + 1 < g && std::uniform_int_distribution<int>(0, 2)(rng) > 0) {
      gate.children.push_back("g" + std::to_string(i + 1));
    }
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: gate.kind = GateKind::And; break;
      case 1: gate.kind = GateKind::Or; break;
      default:
        gate.kind = GateKind::KOfN;
        gate.k = std::uniform_int_distribution<int>(1, static_cast<int>(gate.children.size()))(rng);
    }
    t.gates["g" + std::to_string(i)] = gate;
  }
  t.top = "g0";
  t.validate();
  return t;
}

bool top_occurs(const riskmodel::FaultTree& tree, const std::set<std::string>& occurred) {
  std::map<std::string, bool> memo;
  std::function<bool(const std::string&)> eval = [&](const std::string& id) -> bool {
    if (tree.basic_events.count(id)) return occurred.count(id) > 0;
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const auto& gate = tree.gates.at(id);
    int hits = 0;
    for (const auto& c : gate.children) hits += eval(c) ? 1 : 0;
    const int n = static_cast<int>(gate.children.size());
    bool v = false;
    switch (gate.kind) {
      case riskmodel::GateKind::And: v = hits == n; break;
      case riskmodel::GateKind::Or: v = hits > 0; break;
      case riskmodel::GateKind::KOfN: v = hits >= gate.k; break;
    }
    memo[id] = v;
    return v;
  };
  return eval(tree.top);
}

namespace {

std::vector<std::string> event_ids(const riskmodel::FaultTree& tree) {
  std::vector<std::string> ids;
  for (const auto& [id, e] : tree.basic_events) ids.push_back(id);
  return ids;
}

std::set<std::string> subset(const std::vector<std::string>& ids, std::uint32_t mask) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (mask & (1u << i)) out.insert(ids[i]);
  }
  return out;
}

}  // namespace

double enumerate_top_probability(const riskmodel::FaultTree& tree) {
  const auto ids = event_ids(tree);
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << ids.size()); ++mask) {
    double p = 1.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const double q = *tree.basic_events.at(ids[i]).probability;
      p *= (mask & (1u << i)) ? q : 1.0 - q;
    }
    if (top_occurs(tree, subset(ids, mask))) total += p;
  }
  return total;
}

std::set<riskmodel::CutSet> brute_force_cut_sets(const riskmodel::FaultTree& tree) {
  const auto ids = event_ids(tree);
  std::vector<bool> cuts(1u << ids.size());
  for (std::uint32_t mask = 0; mask < cuts.size(); ++mask) cuts[mask] = top_occurs(tree, subset(ids, mask));
  std::set<riskmodel::CutSet> out;
  for (std::uint32_t mask = 0; mask < cuts.size(); ++mask) {
    if (!cuts[mask]) continue;
    bool minimal = true;
    for (std::uint32_t sub = (mask - 1) & mask;; sub = (sub - 1) & mask) {
      if (sub != mask && cuts[sub]) {
        minimal = false;
        break;
      }
      if (sub == 0) break;
    }
    if (minimal) out.insert(subset(ids, mask));
  }
  return out;
}

// --- monotone chains ---------------------------------------------------------

ChainFixture random_chain_fixture(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ChainFixture f;
  f.kri_table = "kri-table";
  f.kci_table = "kci-table";

  riskmodel::KriProbabilityTable kt;
  kt.id = f.kri_table;
  kt.kri_id = "kri";
  const int bins = std::uniform_int_distribution<int>(2, 5)(rng);
  std::set<int> cuts;
  while (static_cast<int>(cuts.size()) < bins - 1) cuts.insert(std::uniform_int_distribution<int>(1, 99)(rng));
  kt.edges.push_back(0.0);
  for (int c : cuts) kt.edges.push_back(c);
  for (int i = 0; i < bins; ++i) kt.probabilities.push_back(0.01 + 0.99 * unit(rng));
  std::sort(kt.probabilities.begin(), kt.probabilities.end());
  f.ctx.kri_tables[kt.id] = kt;

  riskmodel::KciProbabilityTable ct;
  ct.id = f.kci_table;
  ct.kci_id = "kci";
  const int levels = std::uniform_int_distribution<int>(2, 6)(rng);
  for (int i = 0; i < levels; ++i) {
    ct.levels.push_back("K" + std::to_string(i + 1));
    ct.probabilities.push_back(0.001 + 0.999 * unit(rng));
  }
  std::sort(ct.probabilities.begin(), ct.probabilities.end(), std::greater<>());
  f.ctx.kci_tables[ct.id] = ct;

  auto& chain = f.chain;
  chain.id = "CHAIN";
  chain.initiating_frequency = 0.5 + 9.5 * unit(rng);
  chain.severity = riskmodel::Severity::quantitative(1e6, "USD");
  chain.steps.push_back({"kri-step", "", riskmodel::KriTableRef{f.kri_table}});
  chain.steps.push_back({"kci-step", "", riskmodel::KciTableRef{f.kci_table}});
  const int fixed = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < fixed; ++i) {
    chain.steps.push_back({"fixed-" + std::to_string(i), "", riskmodel::FixedProbability{0.05 + 0.95 * unit(rng)}});
  }
  std::shuffle(chain.steps.begin(), chain.steps.end(), rng);
  return f;
}

double oracle_rate(const ChainFixture& f, double kri_value, const std::string& level) {
  const auto& kt = f.ctx.kri_tables.at(f.kri_table);
  const auto& ct = f.ctx.kci_tables.at(f.kci_table);
  double rate = f.chain.initiating_frequency;
  for (const auto& step : f.chain.steps) {
    if (const auto* fixed = std::get_if<riskmodel::FixedProbability>(&step.source)) {
      rate *= fixed->value;
    } else if (std::holds_alternative<riskmodel::KriTableRef>(step.source)) {
      std::size_t bin = 0;
      for (std::size_t i = 0; i < kt.edges.size(); ++i) {
        if (kri_value >= kt.edges[i]) bin = i;
      }
      rate *= kt.probabilities[bin];
    } else {
      const auto pos = std::find(ct.levels.begin(), ct.levels.end(), level) - ct.levels.begin();
      rate *= ct.probabilities[pos];
    }
  }
  return rate;
}

std::optional<std::string> oracle_min_kci(const ChainFixture& f, double tolerance, double kri_value) {
  for (const auto& level : f.ctx.kci_tables.at(f.kci_table).levels) {
    if (oracle_rate(f, kri_value, level) <= tolerance) return level;
  }
  return std::nullopt;
}

std::optional<double> oracle_max_kri(const ChainFixture& f, double tolerance, const std::string& level) {
  const auto& kt = f.ctx.kri_tables.at(f.kri_table);
  for (std::size_t b = 0; b < kt.edges.size(); ++b) {
    if (oracle_rate(f, kt.edges[b], level) > tolerance) {
      if (b == 0) return std::nullopt;
      return kt.edges[b];
    }
  }
  return f.scale_hi;
}

// --- rule histories ----------------------------------------------------------

RuleWorld random_rule_world(Rng& rng) {
  RuleWorld w;
  const int n_kris = std::uniform_int_distribution<int>(1, 3)(rng);
  for (int i = 0; i < n_kris; ++i) {
    indicators::Kri k;
    k.id = "k" + std::to_string(i);
    k.scale = {"score", 0.0, 100.0};
    w.catalog.kris[k.id] = k;
  }
  indicators::Kci ordered;
  ordered.id = "c0";
  ordered.metric.kind = indicators::KciMetric::Kind::OrderedLevels;
  ordered.metric.levels = {"L1", "L2", "L3", "L4"};
  w.catalog.kcis[ordered.id] = ordered;
  indicators::Kci continuous;
  continuous.id = "c1";
  continuous.mitigation_type = indicators::MitigationType::Deployment;
  continuous.metric.kind = indicators::KciMetric::Kind::Continuous;
  continuous.metric.unit = "jailbreak rate";
  continuous.metric.bound = 0.3;
  w.catalog.kcis[continuous.id] = continuous;
  w.catalog.validate();

  const int n_rules = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int i = 0; i < n_rules; ++i) {
    indicators::IfThenRule r;
    r.id = "R" + std::to_string(i);
    r.kri_id = "k" + std::to_string(std::uniform_int_distribution<int>(0, n_kris - 1)(rng));
    r.kri_threshold = std::uniform_int_distribution<int>(10, 90)(rng);
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
      r.kci_id = "c0";
      r.required = ordered.metric.levels[std::uniform_int_distribution<std::size_t>(0, 3)(rng)];
    } else {
      r.kci_id = "c1";
      r.required = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
    }
    r.linked_model = "M";
    r.tolerance_ref = "d";
    r.escalation_severity = std::vector<std::string>{"low", "medium", "high"}[std::uniform_int_distribution<int>(0, 2)(rng)];
    w.catalog.validate_rule(r);
    w.rules.push_back(r);
  }
  return w;
}

indicators::Measurement random_measurement(Rng& rng, const RuleWorld& world, Timestamp around) {
  std::vector<std::string> ids;
  for (const auto& [id, k] : world.catalog.kris) ids.push_back(id);
  for (const auto& [id, k] : world.catalog.kcis) ids.push_back(id);
  indicators::Measurement m;
  m.indicator_id = ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
  // Up to 120 days back, so some measurements fall outside the window.
  m.timestamp = around - std::chrono::seconds(std::uniform_int_distribution<std::int64_t>(0, 120 * 86400)(rng));
  m.elicitation.effort_tier = std::uniform_int_distribution<int>(1, 3)(rng);
  m.elicitation.includes_posttraining_enhancements = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  if (m.indicator_id == "c0") {
    m.level = std::vector<std::string>{"L1", "L2", "L3", "L4"}[std::uniform_int_distribution<int>(0, 3)(rng)];
  } else if (m.indicator_id == "c1") {
    m.value = std::uniform_real_distribution<double>(0.0, 0.8)(rng);
  } else {
    m.value = std::uniform_int_distribution<int>(0, 100)(rng);
  }
  return m;
}

std::optional<std::vector<OracleStatus>> oracle_evaluate(const RuleWorld& world,
                                                         const std::vector<indicators::Measurement>& history,
                                                         double margin, Timestamp as_of,
                                                         std::optional<Timestamp> weights_changed_at) {
  const Timestamp start = weights_changed_at ? *weights_changed_at : as_of - std::chrono::hours(24 * 90);
  std::vector<OracleStatus> out;
  for (const auto& rule : world.rules) {
    OracleStatus st;
    for (const auto& m : history) {
      if (m.indicator_id != rule.kri_id || m.timestamp < start || m.timestamp > as_of) continue;
      double v = m.value + (m.elicitation.includes_posttraining_enhancements ? 0.0 : margin);
      v = std::min(v, world.catalog.kris.at(rule.kri_id).scale.hi);
      st.kri_value = st.kri_value ? std::max(*st.kri_value, v) : v;
    }
    st.triggered = st.kri_value && *st.kri_value >= rule.kri_threshold;

    const indicators::Measurement* latest = nullptr;
    for (const auto& m : history) {
      if (m.indicator_id != rule.kci_id || m.timestamp > as_of) continue;
      if (latest == nullptr || m.timestamp >= latest->timestamp) latest = &m;
    }
    if (latest == nullptr) {
      if (st.triggered) return std::nullopt;
    } else if (const auto* level = std::get_if<std::string>(&rule.required)) {
      st.met = latest->level && latest->level->back() >= level->back();
    } else {
      st.met = latest->value <= std::get<double>(rule.required);
    }
    out.push_back(st);
  }
  return out;
}

}  // namespace frm::test

// --- snapshots ---------------------------------------------------------------

namespace frm::test {
namespace {

struct Gen {
  Rng& rng;

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  bool coin() { return uniform(0, 1) == 1; }
  std::string word(const std::string& prefix) { return prefix + std::to_string(uniform(0, 99999)); }
  Timestamp time() { return from_unix(1577836800 + std::uniform_int_distribution<std::int64_t>(0, 315360000)(rng)); }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; }

  riskmodel::Severity severity() {
    if (coin()) return riskmodel::Severity::quantitative(real(1.0, 1e10), pick<std::string>({"USD", "casualties"}));
    return riskmodel::Severity::qualitative(word("scenario "));
  }

  riskmodel::QuantifiedRisk risk() {
    riskmodel::QuantifiedRisk q{real(0.0, 1.0), severity(), std::nullopt};
    if (coin()) q.ci95 = riskmodel::Interval{q.rate * 0.5, q.rate * 1.5};
    return q;
  }

  std::vector<double> sorted(int n, double lo, double hi, bool descending = false) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(real(lo, hi));
    std::sort(v.begin(), v.end());
    if (descending) std::reverse(v.begin(), v.end());
    return v;
  }

  riskmodel::RiskModel model(const std::string& id, const std::string& domain) {
    riskmodel::RiskModel m;
    m.domain = domain;
    switch (uniform(0, 2)) {
      case 0: {
        riskmodel::ScenarioChain c;
        c.id = id;
        c.description = word("chain ");
        c.initiating_frequency = real(0.1, 10.0);
        c.severity = severity();
        c.steps.push_back({"s1", "first", riskmodel::FixedProbability{real(0.0, 1.0)}});
        c.steps.push_back({"s2", "", riskmodel::KriTableRef{"kri-table-0"}});
        c.steps.push_back({"s3", "third", riskmodel::KciTableRef{"kci-table-0"}});
        m.body = c;
        break;
      }
      case 1: {
        riskmodel::FaultTreeModel f;
        f.id = id;
        f.description = word("tree ");
        f.demand_frequency = real(0.1, 100.0);
        f.severity = severity();
        f.tree = random_fault_tree(rng, 5, 3);
        if (coin()) f.tree.basic_events.begin()->second.description = word("event ");
        m.body = f;
        break;
      }
      default: {
        riskmodel::EventTreeModel e;
        e.id = id;
        e.severity = severity();
        e.tree.initiating_description = word("initiator ");
        e.tree.frequency = real(0.01, 5.0);
        const int points = uniform(1, 3);
        for (int i = 0; i < points; ++i) {
          const double p = real(0.0, 1.0);
          e.tree.branch_points.push_back({word("branch "), {"yes", "no"}, {p, 1.0 - p}});
        }
        for (std::size_t leaf = 0; leaf < (1u << points); ++leaf) {
          std::vector<std::size_t> path;
          for (int i = 0; i < points; ++i) path.push_back((leaf >> i) & 1u);
          e.tree.leaves.push_back({path, coin() ? e.severity : severity()});
        }
        m.body = e;
      }
    }
    return m;
  }
};

}  // namespace

registry::Snapshot random_snapshot(Rng& rng) {
  Gen g{rng};
  registry::Snapshot s;
  const std::vector<std::string> domains = {"cyber", "bio", "autonomy"};

  if (g.coin()) {
    tolerance::RiskTolerance total =
        g.coin() ? tolerance::RiskTolerance::quantitative(g.real(0.01, 1.0), riskmodel::Severity::quantitative(5e8, "USD"), g.word("basis "))
                 : tolerance::RiskTolerance::scenario_bounded(g.word("scenario "), g.real(0.01, 1.0));
    std::map<std::string, double> shares;
    std::map<std::string, std::string> rationale;
    for (const auto& d : domains) {
      shares[d] = total.max_rate / 4.0;
      if (g.coin()) rationale[d] = g.word("because ");
    }
    s.budget = tolerance::allocate_budget(total, shares, rationale);
  }

  indicators::Kri kri;
  kri.id = "kri-0";
  kri.name = g.word("benchmark ");
  kri.kind = g.coin() ? indicators::KriKind::InternalCapability : indicators::KriKind::ExternalEnvironment;
  kri.scale = {"percent", 0.0, 100.0};
  kri.thresholds = {g.real(10, 50), g.real(50, 90)};
  kri.tables.push_back({"kri-table-0", "kri-0", {0.0, 40.0, 60.0}, g.sorted(3, 0.0, 1.0), g.coin() ? g.word("src ") : ""});
  s.catalog.kris[kri.id] = kri;

  indicators::Kci ordered;
  ordered.id = "kci-0";
  ordered.name = "security level";
  ordered.mitigation_type = indicators::MitigationType::Containment;
  ordered.metric.levels = {"L1", "L2", "L3", "L4"};
  ordered.tables.push_back({"kci-table-0", "kci-0", ordered.metric.levels, g.sorted(4, 0.0, 1.0, true), ""});
  s.catalog.kcis[ordered.id] = ordered;
  indicators::Kci cont;
  cont.id = "kci-1";
  cont.name = "jailbreak rate";
  cont.mitigation_type = g.coin() ? indicators::MitigationType::Deployment : indicators::MitigationType::Assurance;
  cont.metric.kind = indicators::KciMetric::Kind::Continuous;
  cont.metric.unit = "rate";
  cont.metric.bound = g.real(0.0, 1.0);
  s.catalog.kcis[cont.id] = cont;

  const int n_models = g.uniform(0, 4);
  for (int i = 0; i < n_models; ++i) {
    const std::string id = "M-" + std::to_string(i);
    s.models[id] = g.model(id, g.pick(domains));
  }

  const int n_rules = g.uniform(0, 3);
  for (int i = 0; i < n_rules; ++i) {
    indicators::IfThenRule r;
    r.id = "R-" + std::to_string(i);
    r.kri_id = kri.id;
    r.kri_threshold = g.real(0, 100);
    if (g.coin()) {
      r.kci_id = ordered.id;
      r.required = g.pick(ordered.metric.levels);
    } else {
      r.kci_id = cont.id;
      r.required = g.real(0.0, 1.0);
    }
    r.linked_model = "M-0";
    r.tolerance_ref = g.pick(domains);
    r.escalation_severity = g.pick<std::string>({"low", "medium", "high"});
    s.rules[r.id] = r;
  }

  const int n_meas = g.uniform(0, 6);
  for (int i = 0; i < n_meas; ++i) {
    indicators::Measurement m;
    m.timestamp = g.time();
    m.elicitation = {g.word("notes "), g.uniform(1, 3), g.coin()};
    switch (g.uniform(0, 2)) {
      case 0:
        m.indicator_id = kri.id;
        m.value = g.real(0, 100);
        if (g.coin()) m.effective_compute = std::pow(10.0, g.real(20, 26));
        break;
      case 1:
        m.indicator_id = ordered.id;
        m.level = g.pick(ordered.metric.levels);
        break;
      default:
        m.indicator_id = cont.id;
        m.value = g.real(0, 1);
    }
    s.measurements.push_back(m);
  }

  for (const auto& d : domains) {
    if (!g.coin()) continue;
    identification::RiskDomainEntry e;
    e.id = d;
    e.name = g.word("domain ");
    e.source = g.word("taxonomy ");
    if (g.coin()) {
      e.status = identification::DomainStatus::Excluded;
      e.exclusion_justification = g.word("out of scope ");
    }
    for (const auto& [id, m] : s.models) {
      if (m.domain == d) e.linked_models.push_back(id);
    }
    s.universe.domains[d] = e;
  }
  const int n_findings = g.uniform(0, 3);
  for (int i = 0; i < n_findings; ++i) {
    identification::Finding f;
    f.id = "F-" + std::to_string(i + 1);
    f.reporter = g.pick<identification::Reporter>(
        {identification::Reporter::Internal, identification::Reporter::ThirdParty, identification::Reporter::Anonymous});
    f.description = g.word("finding ");
    f.stage = g.pick<identification::Stage>({identification::Stage::Reported, identification::Stage::Triaged,
                                             identification::Stage::Confirmed, identification::Stage::Dismissed});
    if (g.coin()) f.fishbone = identification::Fishbone{identification::FishboneCategory::ToolingScaffolding, g.word("cause ")};
    f.severity_estimate = g.pick<governance::Tier>({governance::Tier::Low, governance::Tier::Medium, governance::Tier::High});
    f.history.push_back({identification::Stage::Reported, identification::Stage::Triaged, g.time(), g.word("note ")});
    if (g.coin()) f.annotations.push_back(g.word("annotation "));
    if (g.coin()) f.due = g.time();
    if (f.stage == identification::Stage::Dismissed) f.dismissal_justification = g.word("why ");
    if (g.coin()) f.promoted_model = "M-0";
    s.universe.findings[f.id] = f;
  }
  s.universe.next_finding = n_findings + 1;
  const int n_actions = g.uniform(0, 3);
  for (int i = 0; i < n_actions; ++i) {
    const std::string id = "A-" + std::to_string(i + 1);
    s.universe.action_items[id] = {id, g.pick<std::string>({"define_risk_model", "define_indicators"}), g.pick(domains),
                                   g.word("todo "), g.coin()};
  }
  s.universe.next_action = n_actions + 1;

  if (!s.models.empty() && g.coin()) {
    registry::RegisterEntry e;
    e.risk_id = "RISK-1";
    e.risk_owner = "owner";
    e.model_id = s.models.begin()->first;
    e.inherent_risk = g.risk();
    e.residual_risk = g.risk();
    e.kris = {kri.id};
    e.kcis.push_back({ordered.id, "L3", std::nullopt, true});
    e.kcis.push_back({cont.id, "meets", g.real(0, 1), g.coin()});
    e.mapping.push_back({"R-0", g.real(0, 1)});
    e.action_plan.push_back({g.word("do "), "owner", g.time(), g.word("res ")});
    s.entries[e.risk_id] = e;
  }

  const int n_esc = g.uniform(0, 3);
  for (int i = 0; i < n_esc; ++i) {
    governance::EscalationEvent e;
    e.id = "E-000" + std::to_string(i + 1);
    e.source = "R-0";
    e.severity = g.pick<governance::Tier>({governance::Tier::Low, governance::Tier::Medium, governance::Tier::High});
    e.raised_at = g.time();
    e.notify = governance::notify_chain(e.severity);
    e.deadline = e.raised_at + std::chrono::hours(24);
    if (g.coin()) e.resolution = governance::Resolution{"cro", e.raised_at + std::chrono::hours(2), g.word("decision ")};
    s.escalations.push_back(e);

    registry::BreachRecord b;
    b.id = "B-000" + std::to_string(i + 1);
    b.rule_id = "R-0";
    b.triggered_at = e.raised_at;
    if (g.coin()) b.kri_value = g.real(0, 100);
    if (g.coin()) b.kci_observed = "L2";
    b.escalation_id = e.id;
    if (g.coin()) b.cleared_at = g.time();
    b.actions = {"development hold"};
    s.breaches.push_back(b);
  }
  s.next_escalation = n_esc + 1;
  s.next_breach = n_esc + 1;

  for (const auto& [id, r] : s.rules) {
    indicators::RuleStatus st;
    st.rule_id = id;
    st.kri_triggered = g.coin();
    st.kci_met = g.coin();
    st.state = !st.kri_triggered ? indicators::RuleState::NotTriggered
                                 : (st.kci_met ? indicators::RuleState::Satisfied : indicators::RuleState::Breached);
    st.evaluated_at = g.time();
    if (g.coin()) st.kri_value = g.real(0, 100);
    if (g.coin()) st.kci_observed = "L1";
    if (st.state == indicators::RuleState::Breached) st.required_action = "hold";
    s.rule_statuses[id] = st;
  }

  auto& lc = s.lifecycle;
  lc.phase = g.pick<lifecycle::Phase>({lifecycle::Phase::Planning, lifecycle::Phase::Training, lifecycle::Phase::Deployed});
  lc.model_label = g.word("model-");
  lc.effective_compute = std::pow(10.0, g.real(20, 25));
  lc.planned_compute = std::pow(10.0, g.real(25, 27));
  if (g.coin()) lc.weights_changed_at = g.time();
  lc.hold = g.coin();
  if (lc.hold) lc.hold_reason = "rule R-0 breached";
  if (lc.phase != lifecycle::Phase::Planning) {
    lc.history.push_back({lifecycle::Phase::Planning, lifecycle::Phase::Training, g.time(), {"a_tolerance_and_budget: pass"}, {"owner", "cro"}});
  }
  if (g.coin()) s.planned_mitigations.push_back({ordered.id, "L3", g.word("plan ")});
  if (g.coin()) s.redteam_records.push_back({"RT-0001", lc.model_label, g.time(), g.word("summary ")});

  s.schedule.compute_growth_factor = g.real(1.5, 10);
  s.schedule.max_interval_days = g.uniform(30, 365);
  if (g.coin()) s.schedule.last_evaluated[kri.id] = {std::pow(10.0, g.real(20, 25)), g.time()};

  s.audit_count = g.uniform(0, 1000);
  registry::Digest d{};
  for (auto& b : d) b = static_cast<std::uint8_t>(g.uniform(0, 255));
  s.audit_head = registry::to_hex(d);

  if (g.coin()) s.extras["$"] = Json{{"x_console_layout", Json{{"columns", g.uniform(1, 5)}}}};
  if (!s.models.empty() && g.coin()) s.extras["models/" + s.models.begin()->first] = Json{{"x_owner_note", g.word("note ")}};
  if (g.coin()) s.extras["kris/" + kri.id] = Json{{"x_dashboard_color", "red"}};
  if (!s.measurements.empty() && g.coin()) s.extras["measurements/0"] = Json{{"x_run_id", g.uniform(1, 1000)}};
  return s;
}

}  // namespace frm::test
