#include "frm/indicators/solve.hpp"

#include <set>

#include "frm/common/error.hpp"

namespace frm::indicators {
namespace {

using riskmodel::IndicatorContext;
using riskmodel::ScenarioChain;

void require_monotone(const ScenarioChain& chain, const IndicatorContext& ctx) {
  for (const auto& id : riskmodel::kri_tables_of(chain)) {
    auto it = ctx.kri_tables.find(id);
    if (it != ctx.kri_tables.end() && !it->second.monotone()) {
      throw Error(ErrorCode::NonMonotoneTable, id);
    }
  }
  for (const auto& id : riskmodel::kci_tables_of(chain)) {
    auto it = ctx.kci_tables.find(id);
    if (it != ctx.kci_tables.end() && !it->second.monotone()) {
      throw Error(ErrorCode::NonMonotoneTable, id);
    }
  }
}

const riskmodel::KciProbabilityTable& single_kci_table(const ScenarioChain& chain,
                                                       const IndicatorContext& ctx) {
  const riskmodel::KciProbabilityTable* first = nullptr;
  for (const auto& id : riskmodel::kci_tables_of(chain)) {
    auto it = ctx.kci_tables.find(id);
    if (it == ctx.kci_tables.end()) throw Error(ErrorCode::UnresolvedStep, "no KCI table " + id);
    if (first != nullptr && it->second.kci_id != first->kci_id) {
      throw Error(ErrorCode::InvalidArgument, chain.id + " depends on more than one KCI");
    }
    if (first == nullptr) first = &it->second;
  }
  if (first == nullptr) throw Error(ErrorCode::InvalidArgument, chain.id + " has no KCI step");
  return *first;
}

std::string single_kri(const ScenarioChain& chain, const IndicatorContext& ctx) {
  std::set<std::string> kris;
  for (const auto& id : riskmodel::kri_tables_of(chain)) {
    auto it = ctx.kri_tables.find(id);
    if (it == ctx.kri_tables.end()) throw Error(ErrorCode::UnresolvedStep, "no KRI table " + id);
    kris.insert(it->second.kri_id);
  }
  if (kris.size() != 1) {
    throw Error(ErrorCode::InvalidArgument, chain.id + " must depend on exactly one KRI");
  }
  return *kris.begin();
}

}  // namespace

MinKciSolution solve_min_kci(const ScenarioChain& chain, const IndicatorContext& ctx,
                             double tolerance_rate) {
  require_monotone(chain, ctx);
  const auto& table = single_kci_table(chain, ctx);
  MinKciSolution out;
  out.kci_id = table.kci_id;
  out.levels = table.levels;

  IndicatorContext probe = ctx;
  const auto rate_at = [&](std::size_t level) {
    probe.kci_levels[table.kci_id] = table.levels[level];
    return riskmodel::chain_residual_rate(chain, probe).rate;
  };
  // Rates are nonincreasing in level, so the admissible levels form a suffix.
  std::size_t lo = 0;
  std::size_t hi = table.levels.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (rate_at(mid) <= tolerance_rate) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo < table.levels.size()) {
    out.level = table.levels[lo];
    out.rate_at_level = rate_at(lo);
  }
  return out;
}

MinKciSolution solve_min_kci(const ScenarioChain& chain, IndicatorContext ctx,
                             double tolerance_rate, double kri_value) {
  ctx.kri_values[single_kri(chain, ctx)] = kri_value;
  return solve_min_kci(chain, ctx, tolerance_rate);
}

MaxKriSolution solve_max_kri(const ScenarioChain& chain, IndicatorContext ctx,
                             double tolerance_rate, const std::string& kci_level,
                             double scale_hi) {
  require_monotone(chain, ctx);
  const auto& kci_table = single_kci_table(chain, ctx);
  // Validates the level name.
  kci_table.index_of(kci_level);
  ctx.kci_levels[kci_table.kci_id] = kci_level;

  MaxKriSolution out;
  out.kri_id = single_kri(chain, ctx);
  // The rate is piecewise constant on the common refinement of every table's
  // bins for this KRI.
  std::set<double> edge_set;
  for (const auto& id : riskmodel::kri_tables_of(chain)) {
    const auto& t = ctx.kri_tables.at(id);
    edge_set.insert(t.edges.begin(), t.edges.end());
  }
  const std::vector<double> edges(edge_set.begin(), edge_set.end());
  const auto passes = [&](std::size_t bin) {
    ctx.kri_values[out.kri_id] = edges[bin];
    return riskmodel::chain_residual_rate(chain, ctx).rate <= tolerance_rate;
  };
  // Rates are nondecreasing in the KRI value: find the first failing bin.
  std::size_t lo = 0;
  std::size_t hi = edges.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (passes(mid)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo == 0) return out;
  out.threshold = lo == edges.size() ? scale_hi : edges[lo];
  return out;
}

}  // namespace frm::indicators
