#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "signalcast/cv.hpp"
#include "signalcast/dataset.hpp"
#include "signalcast/discretizer.hpp"

namespace signalcast {

enum class CorrelationMeasure { kSymmetricalUncertainty, kPearson };
CorrelationMeasure parse_correlation_measure(std::string_view text);

struct CfsOptions {
  CorrelationMeasure measure = CorrelationMeasure::kSymmetricalUncertainty;
  /// Numeric input is binned per training fold with this strategy before
  /// symmetrical uncertainty is computed.
  DiscretizeStrategy discretize = DiscretizeStrategy::kMdl;
  int stale_limit = 5;
  /// Repetitions of the fold split to pool; 1 gives counts in 0..folds.
  int repetitions = 1;
};

/// 2 * I(X;Y) / (H(X) + H(Y)) over weighted binary columns; 0 when both
/// entropies vanish.
double symmetrical_uncertainty(std::span<const int> x, std::span<const int> y, std::span<const double> weights);

/// k * mean(r_cf) / sqrt(k + k (k - 1) mean(r_ff)).
double cfs_merit(std::size_t k, double mean_feature_class, double mean_feature_feature);

/// Best-first forward search from the empty subset. Stops after
/// `stale_limit` consecutive expansions that fail to improve the best merit.
/// Returns selected column indices in ascending order.
std::vector<std::size_t> cfs_search(const WeightedDataset& train, const CfsOptions& options);

/// Runs cfs_search on the training part of every fold and counts how often
/// each signal is chosen.
std::vector<std::pair<std::string, int>> cfs_select(const WeightedDataset& ds, const CvPlan& plan,
                                                    const CfsOptions& options = {});

}  // namespace signalcast
