#include "frm/riskmodel/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "frm/common/error.hpp"
#include "frm/common/stats.hpp"

namespace frm::riskmodel {
namespace {

enum class Target { Probability, Frequency };

void check_distribution(const std::string& key, const Distribution& d, Target target) {
  const auto bad = [&](const char* why) {
    throw Error(ErrorCode::InvalidDistribution, key + ": " + why);
  };
  const auto finite = [](double x) { return std::isfinite(x); };
  const double upper = target == Target::Probability ? 1.0 : INFINITY;
  switch (d.kind) {
    case Distribution::Kind::Point:
      if (!(d.a >= 0.0 && d.a <= upper)) bad("point value out of range");
      break;
    case Distribution::Kind::Uniform:
      if (!(finite(d.a) && finite(d.b) && d.a >= 0.0 && d.a <= d.b && d.b <= upper)) {
        bad("uniform bounds must satisfy 0 <= lo <= hi (<= 1 for probabilities)");
      }
      break;
    case Distribution::Kind::Triangular:
      if (!(finite(d.a) && finite(d.c) && d.a >= 0.0 && d.a <= d.b && d.b <= d.c &&
            d.c <= upper)) {
        bad("triangular needs 0 <= lo <= mode <= hi (<= 1 for probabilities)");
      }
      break;
    case Distribution::Kind::Beta:
      if (target != Target::Probability) bad("beta applies to probabilities only");
      if (!(d.a > 0.0 && d.b > 0.0 && finite(d.a) && finite(d.b))) bad("beta shape must be > 0");
      break;
    case Distribution::Kind::Lognormal:
      if (target != Target::Frequency) bad("lognormal applies to frequencies only");
      if (!(finite(d.a) && finite(d.b) && d.b >= 0.0)) bad("lognormal needs finite mu, sigma >= 0");
      break;
  }
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sample(const Distribution& d, std::mt19937_64& rng) {
  switch (d.kind) {
    case Distribution::Kind::Point:
      return d.a;
    case Distribution::Kind::Uniform:
      return d.a + (d.b - d.a) * unit_draw(rng);
    case Distribution::Kind::Triangular: {
      const double u = unit_draw(rng);
      const double lo = d.a, mode = d.b, hi = d.c;
      if (hi == lo) return lo;
      const double split = (mode - lo) / (hi - lo);
      return u < split ? lo + std::sqrt(u * (hi - lo) * (mode - lo))
                       : hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
    }
    case Distribution::Kind::Beta: {
      std::gamma_distribution<double> ga(d.a, 1.0);
      std::gamma_distribution<double> gb(d.b, 1.0);
      const double x = ga(rng);
      const double y = gb(rng);
      return x + y > 0.0 ? x / (x + y) : 0.5;
    }
    case Distribution::Kind::Lognormal: {
      if (d.b == 0.0) return std::exp(d.a);
      std::lognormal_distribution<double> ln(d.a, d.b);
      return ln(rng);
    }
  }
  return d.a;
}

QuantifiedRisk summarize(std::vector<double>& draws, const Severity& severity) {
  // Incremental mean keeps identical draws exactly equal to their value.
  double mean = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    mean += (draws[i] - mean) / static_cast<double>(i + 1);
  }
  std::sort(draws.begin(), draws.end());
  double lo = quantile_sorted(draws, 0.025);
  double hi = quantile_sorted(draws, 0.975);
  // A heavily skewed sample can put its mean outside the central interval;
  // the interval is widened so that it always brackets the reported rate.
  lo = std::min(lo, mean);
  hi = std::max(hi, mean);
  return QuantifiedRisk{mean, severity, Interval{lo, hi}};
}

}  // namespace

QuantifiedRisk monte_carlo_rate(const RiskModel& model, const IndicatorContext& ctx,
                                const UncertaintyMap& uncertainty, std::size_t n,
                                std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "monte carlo needs n >= 1");
  model.validate();
  std::mt19937_64 rng(seed);
  std::vector<double> draws;
  draws.reserve(n);

  if (const auto* chain = std::get_if<ScenarioChain>(&model.body)) {
    std::vector<const Distribution*> step_dist(chain->steps.size(), nullptr);
    std::vector<double> fixed(chain->steps.size(), 0.0);
    const Distribution* freq_dist = nullptr;
    for (const auto& [key, dist] : uncertainty) {
      if (key == kInitiatingFrequencyKey) {
        check_distribution(key, dist, Target::Frequency);
        freq_dist = &dist;
        continue;
      }
      auto it = std::find_if(chain->steps.begin(), chain->steps.end(),
                             [&](const ScenarioStep& s) { return s.id == key; });
      if (it == chain->steps.end()) throw Error(ErrorCode::UnknownEventId, key);
      check_distribution(key, dist, Target::Probability);
      step_dist[static_cast<std::size_t>(it - chain->steps.begin())] = &dist;
    }
    for (std::size_t i = 0; i < chain->steps.size(); ++i) {
      if (step_dist[i] == nullptr) fixed[i] = step_probability(chain->steps[i], ctx);
    }
    for (std::size_t draw = 0; draw < n; ++draw) {
      // Keys are sampled in UncertaintyMap order so that draws are reproducible.
      std::map<const Distribution*, double> sampled;
      for (const auto& [key, dist] : uncertainty) sampled[&dist] = sample(dist, rng);
      double rate = freq_dist ? sampled.at(freq_dist) : chain->initiating_frequency;
      for (std::size_t i = 0; i < chain->steps.size(); ++i) {
        rate *= step_dist[i] ? sampled.at(step_dist[i]) : fixed[i];
      }
      draws.push_back(rate);
    }
    return summarize(draws, chain->severity);
  }

  if (const auto* ft = std::get_if<FaultTreeModel>(&model.body)) {
    for (const auto& [key, dist] : uncertainty) {
      if (key == kDemandFrequencyKey) {
        check_distribution(key, dist, Target::Frequency);
      } else if (ft->tree.basic_events.count(key) == 0) {
        throw Error(ErrorCode::UnknownEventId, key);
      } else {
        check_distribution(key, dist, Target::Probability);
      }
    }
    ProbabilityOverrides overrides;
    for (std::size_t draw = 0; draw < n; ++draw) {
      double demand = ft->demand_frequency;
      for (const auto& [key, dist] : uncertainty) {
        const double v = sample(dist, rng);
        if (key == kDemandFrequencyKey) {
          demand = v;
        } else {
          overrides[key] = v;
        }
      }
      draws.push_back(demand * eval_fault_tree(ft->tree, overrides));
    }
    return summarize(draws, ft->severity);
  }

  throw Error(ErrorCode::InvalidModel, "monte carlo supports scenario chains and fault trees");
}

}  // namespace frm::riskmodel
