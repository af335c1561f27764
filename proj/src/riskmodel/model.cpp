#include "frm/riskmodel/model.hpp"

#include <cmath>

#include "frm/common/error.hpp"
#include "frm/common/overloaded.hpp"

namespace frm::riskmodel {

void ScenarioChain::validate() const {
  if (steps.empty()) throw Error(ErrorCode::InvalidModel, "chain " + id + " has no steps");
  if (!(initiating_frequency >= 0.0 && std::isfinite(initiating_frequency))) {
    throw Error(ErrorCode::InvalidModel, "chain " + id + ": initiating frequency must be >= 0");
  }
  for (const auto& step : steps) {
    if (const auto* fixed = std::get_if<FixedProbability>(&step.source)) {
      if (!(fixed->value >= 0.0 && fixed->value <= 1.0)) {
        throw Error(ErrorCode::InvalidModel, "step " + step.id + ": probability outside [0,1]");
      }
    }
  }
  severity.validate();
}

const std::string& RiskModel::id() const {
  return std::visit([](const auto& m) -> const std::string& { return m.id; }, body);
}

const Severity& RiskModel::severity() const {
  return std::visit([](const auto& m) -> const Severity& { return m.severity; }, body);
}

void RiskModel::validate() const {
  std::visit(overloaded{
                 [](const ScenarioChain& c) { c.validate(); },
                 [](const FaultTreeModel& f) {
                   f.tree.validate();
                   f.severity.validate();
                   if (!(f.demand_frequency >= 0.0)) {
                     throw Error(ErrorCode::InvalidModel, f.id + ": demand frequency must be >= 0");
                   }
                 },
                 [](const EventTreeModel& e) {
                   e.tree.validate();
                   e.severity.validate();
                 },
             },
             body);
}

std::set<std::string> kri_tables_of(const ScenarioChain& chain) {
  std::set<std::string> out;
  for (const auto& step : chain.steps) {
    if (const auto* ref = std::get_if<KriTableRef>(&step.source)) out.insert(ref->table_id);
  }
  return out;
}

std::set<std::string> kci_tables_of(const ScenarioChain& chain) {
  std::set<std::string> out;
  for (const auto& step : chain.steps) {
    if (const auto* ref = std::get_if<KciTableRef>(&step.source)) out.insert(ref->table_id);
  }
  return out;
}

double step_probability(const ScenarioStep& step, const IndicatorContext& ctx) {
  return std::visit(
      overloaded{
          [](const FixedProbability& f) { return f.value; },
          [&](const KriTableRef& ref) {
            auto table = ctx.kri_tables.find(ref.table_id);
            if (table == ctx.kri_tables.end()) {
              throw Error(ErrorCode::UnresolvedStep, step.id + ": no KRI table " + ref.table_id);
            }
            auto value = ctx.kri_values.find(table->second.kri_id);
            if (value == ctx.kri_values.end()) {
              throw Error(ErrorCode::UnresolvedStep,
                          step.id + ": no value for KRI " + table->second.kri_id);
            }
            return table->second.lookup(value->second);
          },
          [&](const KciTableRef& ref) {
            auto table = ctx.kci_tables.find(ref.table_id);
            if (table == ctx.kci_tables.end()) {
              throw Error(ErrorCode::UnresolvedStep, step.id + ": no KCI table " + ref.table_id);
            }
            auto level = ctx.kci_levels.find(table->second.kci_id);
            if (level == ctx.kci_levels.end()) {
              throw Error(ErrorCode::UnresolvedStep,
                          step.id + ": no level for KCI " + table->second.kci_id);
            }
            return table->second.lookup(level->second);
          },
      },
      step.source);
}

QuantifiedRisk chain_residual_rate(const ScenarioChain& chain, const IndicatorContext& ctx) {
  chain.validate();
  double rate = chain.initiating_frequency;
  for (const auto& step : chain.steps) rate *= step_probability(step, ctx);
  return QuantifiedRisk{rate, chain.severity, std::nullopt};
}

QuantifiedRisk quantify(const RiskModel& model, const IndicatorContext& ctx) {
  return std::visit(
      overloaded{
          [&](const ScenarioChain& c) { return chain_residual_rate(c, ctx); },
          [](const FaultTreeModel& f) {
            return QuantifiedRisk{f.demand_frequency * eval_fault_tree(f.tree), f.severity,
                                  std::nullopt};
          },
          [](const EventTreeModel& e) {
            const auto result = eval_event_tree(e.tree);
            auto it = result.by_severity_class.find(e.severity.class_key());
            const double rate = it == result.by_severity_class.end() ? 0.0 : it->second;
            return QuantifiedRisk{rate, e.severity, std::nullopt};
          },
      },
      model.body);
}

}  // namespace frm::riskmodel
