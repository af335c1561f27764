#include "frm/riskmodel/tables.hpp"

#include <algorithm>
#include <cmath>

#include "frm/common/error.hpp"

namespace frm::riskmodel {
namespace {

void check_probabilities(const std::vector<double>& p, const std::string& id) {
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::InvalidIndicator, "table " + id + ": probability outside [0,1]");
    }
  }
}

}  // namespace

std::size_t KriProbabilityTable::bin_of(double value) const {
  // First edge strictly greater than value; the bin is the one before it.
  auto it = std::upper_bound(edges.begin(), edges.end(), value);
  if (it == edges.begin()) return 0;
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

double KriProbabilityTable::upper_edge(std::size_t bin, double scale_hi) const {
  return bin + 1 < edges.size() ? edges[bin + 1] : scale_hi;
}

void KriProbabilityTable::validate() const {
  if (edges.empty() || edges.size() != probabilities.size()) {
    throw Error(ErrorCode::InvalidIndicator,
                "table " + id + ": need one probability per bin edge");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw Error(ErrorCode::InvalidIndicator, "table " + id + ": edges not strictly increasing");
    }
  }
  check_probabilities(probabilities, id);
}

bool KriProbabilityTable::monotone() const {
  return std::is_sorted(probabilities.begin(), probabilities.end());
}

std::size_t KciProbabilityTable::index_of(std::string_view level) const {
  auto it = std::find(levels.begin(), levels.end(), level);
  if (it == levels.end()) {
    throw Error(ErrorCode::UnresolvedStep,
                "table " + id + " has no level '" + std::string(level) + "'");
  }
  return static_cast<std::size_t>(it - levels.begin());
}

void KciProbabilityTable::validate() const {
  if (levels.size() < 2 || levels.size() != probabilities.size()) {
    throw Error(ErrorCode::InvalidIndicator,
                "table " + id + ": need >= 2 levels with one probability each");
  }
  check_probabilities(probabilities, id);
}

bool KciProbabilityTable::monotone() const {
  return std::is_sorted(probabilities.rbegin(), probabilities.rend());
}

}  // namespace frm::riskmodel
