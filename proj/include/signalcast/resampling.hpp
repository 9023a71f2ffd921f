#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "signalcast/dataset.hpp"
#include "signalcast/kmeans.hpp"

namespace signalcast {

/// Knobs of the cluster-guided hybrid filter (SMOTE++).
struct SmotePPConfig {
  double p = 20.0;          // percent of majority rows removed, [0, 100)
  int k2 = 5;               // neighbours used for synthesis
  int kmeans_max_iter = 100;
  std::size_t max_k = 0;    // extra cap on the cluster sweep; 0 = none
  std::uint64_t seed = 1;

  void validate() const;
};

/// Counters a filter reports next to its output.
struct FilterReport {
  std::size_t removed = 0;
  std::size_t synthetic = 0;
  double majority_weight = 0;
  double minority_weight = 0;
  bool minority_cluster_found = false;
  std::size_t cluster_k = 0;
  double residual_imbalance = 0;  // |minority weight - majority weight|
  std::string warning;
};

struct FilterResult {
  WeightedDataset data;
  FilterReport report;
};

/// Label of the class with fewer rows (ties: 1).
int minority_label(const WeightedDataset& ds);

/// Per-column z-score transform fitted on one dataset. Zero-variance
/// columns are centred but not scaled.
class Standardizer {
 public:
  explicit Standardizer(const WeightedDataset& ds);
  Point transform(std::span<const double> features) const;
  Point inverse(std::span<const double> z) const;

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

struct MinorityCluster {
  bool found = false;
  Point centroid;  // in the dataset's feature space
  std::size_t k = 0;
};

/// Sweeps k = 2, 3, ... running k-means on all rows (standardized) until a
/// cluster has a minority share above one half and at least two minority
/// rows. The sweep stops before k reaches sMin (k = 2 is always tried when
/// sMin >= 2) and never exceeds the row count or `max_k`. On failure the
/// centroid is the mean of the minority rows.
MinorityCluster find_minority_cluster(const WeightedDataset& ds, const SmotePPConfig& config);

/// Drops round(p * sMaj / 100) majority rows closest to `centroid`
/// (standardized Euclidean distance, ties by row index). Minority rows and
/// the relative order of survivors are untouched.
WeightedDataset remove_near_majority(const WeightedDataset& ds, std::span<const double> centroid, double p);

/// Removal near the minority cluster, majority reweighting to conserve sMaj,
/// minority reweighting to sMaj/sMin/2, and round(sMaj/2) unit-weight
/// synthetic minority rows.
FilterResult smote_pp(const WeightedDataset& ds, const SmotePPConfig& config);

/// Adds round(percent/100 * sMin) synthetic minority rows, weight 1, each a
/// random point on the segment between a minority row and one of its k
/// nearest minority neighbours. Requires sMin >= 2.
FilterResult smote(const WeightedDataset& ds, double percent, int k, std::uint64_t seed);

/// Percent that makes SMOTE's output balanced by row count.
double balancing_smote_percent(const WeightedDataset& ds);

/// Keeps a uniformly random ceil(target_ratio * sMin) majority rows.
FilterResult spread_subsample(const WeightedDataset& ds, double target_ratio, std::uint64_t seed);

enum class FilterKind { kNone, kSmote, kSpreadSubsample, kSmotePP };

struct FilterSpec {
  FilterKind kind = FilterKind::kNone;
  std::optional<double> smote_percent;  // unset = balance the classes
  int smote_k = 5;
  double spread_ratio = 1.0;
  SmotePPConfig smote_pp;

  /// "none", "smote", "spread_subsample" or "smote_pp".
  std::string name() const;
};

FilterKind parse_filter_kind(std::string_view text);

/// Runs the filter with `seed` (overriding any seed in the spec).
FilterResult apply_filter(const WeightedDataset& ds, const FilterSpec& spec, std::uint64_t seed);

Metadata filter_metadata(const FilterSpec& spec, const FilterReport& report);

}  // namespace signalcast
