#pragma once

#include <span>
#include <string>
#include <vector>

#include "signalcast/dataset.hpp"

namespace signalcast {

/// kMdl keeps the best entropy cut only when it passes the Fayyad-Irani
/// minimum description length test; otherwise the column becomes a single
/// Low bin.
enum class DiscretizeStrategy { kMedian, kEntropy, kMdl };

DiscretizeStrategy parse_discretize_strategy(std::string_view text);
const char* discretize_strategy_name(DiscretizeStrategy s);

/// Best single cut of one column by information gain against the class.
struct SplitChoice {
  double threshold = 0.0;
  double gain = 0.0;
};

/// Weighted lower median: the smallest value whose cumulative weight reaches
/// half the total.
double weighted_median(std::span<const double> values, std::span<const double> weights);

/// Scans every cut between consecutive distinct values (threshold is the
/// midpoint) and returns the one with the largest weighted information gain.
/// Ties keep the lowest threshold. A column with one distinct value returns
/// that value with zero gain.
SplitChoice best_entropy_split(std::span<const double> values, std::span<const int> labels,
                               std::span<const double> weights);

/// Fayyad-Irani MDL acceptance of a binary cut on weighted rows: the gain
/// must exceed (log2(N - 1) + log2(3^k - 2) - k Ent(S) + k1 Ent(S1) +
/// k2 Ent(S2)) / N, with N the total weight and k, k1, k2 the class counts
/// present in the whole column and in each side.
bool mdl_accepts(std::span<const double> values, std::span<const int> labels, std::span<const double> weights,
                 const SplitChoice& split);

/// Binary Low/High cut per signal. Values at or below the threshold are Low.
class Discretizer {
 public:
  Discretizer() = default;
  Discretizer(std::vector<std::string> names, std::vector<double> thresholds);

  /// Fits on `train` only. Entropy strategy falls back to the weighted
  /// median for a column where no cut has positive gain.
  static Discretizer fit(const WeightedDataset& train, DiscretizeStrategy strategy);

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  bool empty() const { return names_.empty(); }

  double bin(std::size_t column, double value) const { return value <= thresholds_[column] ? kLow : kHigh; }

  /// Maps numeric features to Low/High; already-discrete input is returned
  /// unchanged. Throws Error(kInput) when the schema does not match.
  WeightedDataset apply(const WeightedDataset& ds) const;
  std::vector<double> apply(std::span<const double> features) const;

  bool operator==(const Discretizer&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<double> thresholds_;
};

}  // namespace signalcast
