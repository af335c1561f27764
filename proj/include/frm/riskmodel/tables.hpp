#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace frm::riskmodel {

// Step probability as a function of a KRI value. Bins are half-open
// [edges[i], edges[i+1]); values at or above the last edge take the last
// bin, values below the first edge take the first bin.
struct KriProbabilityTable {
  std::string id;
  std::string kri_id;
  std::vector<double> edges;
  std::vector<double> probabilities;
  std::string provenance;

  std::size_t bin_of(double value) const;
  double lookup(double value) const { return probabilities[bin_of(value)]; }
  // Upper edge of bin i, or `scale_hi` for the last bin.
  double upper_edge(std::size_t bin, double scale_hi) const;

  void validate() const;
  // Higher KRI values must never give lower step probabilities.
  bool monotone() const;

  bool operator==(const KriProbabilityTable&) const = default;
};

// Step probability per KCI level, levels ordered weakest first.
struct KciProbabilityTable {
  std::string id;
  std::string kci_id;
  std::vector<std::string> levels;
  std::vector<double> probabilities;
  std::string provenance;

  std::size_t index_of(std::string_view level) const;
  double lookup(std::string_view level) const {
    return probabilities[index_of(level)];
  }

  void validate() const;
  // Stronger controls must never give higher step probabilities.
  bool monotone() const;

  bool operator==(const KciProbabilityTable&) const = default;
};

// Everything a table-sourced scenario step needs to resolve: the tables by id
// and the current KRI values and KCI levels.
struct IndicatorContext {
  std::map<std::string, KriProbabilityTable> kri_tables;
  std::map<std::string, KciProbabilityTable> kci_tables;
  std::map<std::string, double> kri_values;
  std::map<std::string, std::string> kci_levels;
};

}  // namespace frm::riskmodel
