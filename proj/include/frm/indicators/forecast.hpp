#pragma once

#include <optional>
#include <vector>

#include "frm/indicators/catalog.hpp"

namespace frm::indicators {

struct CapabilityPoint {
  double compute = 0.0;  // effective training FLOP
  double value = 0.0;
};

// value = intercept + slope * log10(compute), fitted by least squares.
struct ScalingFit {
  double intercept = 0.0;
  double slope = 0.0;
  std::size_t points_used = 0;
  double residual_rms = 0.0;

  double predict(double compute) const;
  double predict_clamped(double compute, const KriScale& scale) const;
};

struct CrossingForecast {
  ScalingFit fit;
  // Compute at which the fit reaches the threshold; empty when the slope is
  // not positive. Equals the largest observed compute if the threshold is
  // already reached.
  std::optional<double> crossing_compute;
  bool already_reached = false;
};

// Throws InsufficientData with fewer than two distinct compute values.
ScalingFit fit_scaling(const std::vector<CapabilityPoint>& points);

CrossingForecast forecast_crossing(const std::vector<CapabilityPoint>& points, double threshold);

// KRI measurements that carry an effective compute.
std::vector<CapabilityPoint> capability_points(const std::string& kri_id,
                                               const std::vector<Measurement>& history);

}  // namespace frm::indicators
