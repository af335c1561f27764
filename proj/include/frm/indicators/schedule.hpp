#pragma once

#include <map>
#include <string>
#include <vector>

#include "frm/common/time.hpp"

namespace frm::indicators {

struct LastEvaluation {
  double compute = 0.0;
  Timestamp date;

  bool operator==(const LastEvaluation&) const = default;
};

// Re-evaluate a KRI when effective compute has grown by `compute_growth_factor`
// since its last evaluation, or when `max_interval_days` have passed.
struct EvaluationSchedule {
  double compute_growth_factor = 4.0;
  double max_interval_days = 180.0;
  std::map<std::string, LastEvaluation> last_evaluated;

  void validate() const;
  void record(const std::string& kri_id, double compute, Timestamp date);

  bool operator==(const EvaluationSchedule&) const = default;
};

// KRIs from `current_compute` and from the schedule that are due, sorted.
// KRIs never evaluated are always due.
std::vector<std::string> due_evaluations(const EvaluationSchedule& schedule, Timestamp now,
                                         const std::map<std::string, double>& current_compute);

struct ExpertEstimate {
  std::string expert_id;
  double probability = 0.0;
};

inline constexpr double kDisagreementIqr = 0.2;

// Quartiles use linear interpolation between order statistics (position
// q*(n-1)), so the median of an even sample is the mean of the middle pair.
struct ElicitationSummary {
  double median = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  bool disagreement = false;  // p75 - p25 > kDisagreementIqr
};

// Throws TooFewEstimates below three estimates.
ElicitationSummary aggregate_elicitation(const std::vector<ExpertEstimate>& estimates);

}  // namespace frm::indicators
