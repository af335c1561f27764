#include "frm/indicators/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "frm/common/error.hpp"

namespace frm::indicators {

double ScalingFit::predict(double compute) const {
  return intercept + slope * std::log10(compute);
}

double ScalingFit::predict_clamped(double compute, const KriScale& scale) const {
  return std::clamp(predict(compute), scale.lo, scale.hi);
}

ScalingFit fit_scaling(const std::vector<CapabilityPoint>& points) {
  std::set<double> distinct;
  for (const auto& p : points) {
    if (!(p.compute > 0.0)) throw Error(ErrorCode::InvalidArgument, "compute must be > 0");
    distinct.insert(p.compute);
  }
  if (distinct.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "need at least two distinct compute values");
  }
  const double n = static_cast<double>(points.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& p : points) {
    mean_x += std::log10(p.compute);
    mean_y += p.value;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log10(p.compute) - mean_x;
    sxx += dx * dx;
    sxy += dx * (p.value - mean_y);
  }
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.points_used = points.size();
  double sq = 0.0;
  for (const auto& p : points) {
    const double r = p.value - fit.predict(p.compute);
    sq += r * r;
  }
  fit.residual_rms = std::sqrt(sq / n);
  return fit;
}

CrossingForecast forecast_crossing(const std::vector<CapabilityPoint>& points, double threshold) {
  CrossingForecast out;
  out.fit = fit_scaling(points);
  double max_compute = 0.0;
  for (const auto& p : points) {
    max_compute = std::max(max_compute, p.compute);
    out.already_reached = out.already_reached || p.value >= threshold;
  }
  if (out.already_reached) {
    out.crossing_compute = max_compute;
  } else if (out.fit.slope > 0.0) {
    out.crossing_compute = std::pow(10.0, (threshold - out.fit.intercept) / out.fit.slope);
  }
  return out;
}

std::vector<CapabilityPoint> capability_points(const std::string& kri_id,
                                               const std::vector<Measurement>& history) {
  std::vector<CapabilityPoint> out;
  for (const auto& m : history) {
    if (m.indicator_id == kri_id && m.effective_compute) {
      out.push_back({*m.effective_compute, m.value});
    }
  }
  return out;
}

}  // namespace frm::indicators
