#include "frm/indicators/schedule.hpp"

#include <algorithm>
#include <set>

#include "frm/common/error.hpp"
#include "frm/common/stats.hpp"

namespace frm::indicators {

void EvaluationSchedule::validate() const {
  if (!(compute_growth_factor > 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "compute growth factor must be > 1");
  }
  if (!(max_interval_days >= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "max interval must be >= 1 day");
  }
}

void EvaluationSchedule::record(const std::string& kri_id, double compute, Timestamp date) {
  last_evaluated[kri_id] = LastEvaluation{compute, date};
}

std::vector<std::string> due_evaluations(const EvaluationSchedule& schedule, Timestamp now,
                                         const std::map<std::string, double>& current_compute) {
  schedule.validate();
  std::set<std::string> ids;
  for (const auto& [id, c] : current_compute) ids.insert(id);
  for (const auto& [id, last] : schedule.last_evaluated) ids.insert(id);

  std::vector<std::string> due;
  for (const auto& id : ids) {
    auto last = schedule.last_evaluated.find(id);
    if (last == schedule.last_evaluated.end()) {
      due.push_back(id);
      continue;
    }
    bool is_due = days_between(last->second.date, now) >= schedule.max_interval_days;
    auto current = current_compute.find(id);
    if (!is_due && current != current_compute.end() && last->second.compute > 0.0) {
      is_due = current->second / last->second.compute >= schedule.compute_growth_factor;
    }
    if (is_due) due.push_back(id);
  }
  return due;
}

ElicitationSummary aggregate_elicitation(const std::vector<ExpertEstimate>& estimates) {
  if (estimates.size() < 3) {
    throw Error(ErrorCode::TooFewEstimates, std::to_string(estimates.size()) + " < 3");
  }
  std::vector<double> values;
  values.reserve(estimates.size());
  for (const auto& e : estimates) {
    if (!(e.probability >= 0.0 && e.probability <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, e.expert_id + ": probability outside [0,1]");
    }
    values.push_back(e.probability);
  }
  std::sort(values.begin(), values.end());
  ElicitationSummary s;
  s.median = quantile_sorted(values, 0.5);
  s.p25 = quantile_sorted(values, 0.25);
  s.p75 = quantile_sorted(values, 0.75);
  s.disagreement = s.p75 - s.p25 > kDisagreementIqr;
  return s;
}

}  // namespace frm::indicators
