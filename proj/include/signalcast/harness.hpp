#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signalcast/bayes_net.hpp"
#include "signalcast/cfs.hpp"
#include "signalcast/cv.hpp"
#include "signalcast/dataset.hpp"
#include "signalcast/discretizer.hpp"
#include "signalcast/metrics.hpp"
#include "signalcast/resampling.hpp"
#include "signalcast/timeline.hpp"

namespace signalcast {

struct ClassifierConfig {
  StructureStrategy structure = StructureStrategy::kNaive;
  double alpha = 0.5;
  int max_parents = 2;
  DiscretizeStrategy discretize = DiscretizeStrategy::kMedian;
};

/// Fits the discretizer on `train` (weights honoured), bins it, learns the
/// structure and fits the CPTs.
BayesNetModel train_classifier(const WeightedDataset& train, const ClassifierConfig& config);

struct FoldOutcome {
  bool valid = false;
  double auc = 0;
  std::string error;
  BayesNetModel model;
  FilterReport filter;
};

/// One fold: filter the training rows, train on the filtered rows, score the
/// untouched test rows with the training cut points, compute AUC. Any
/// failure yields valid = false with the message.
FoldOutcome evaluate_fold(const WeightedDataset& ds, const FoldSplit& split, const FilterSpec& filter,
                          const ClassifierConfig& classifier, std::uint64_t seed);

struct FoldAucs {
  std::vector<double> aucs;  // folds x repetitions, NaN where a fold failed
  std::vector<std::string> invalid;  // "rep/fold: reason"
  std::string warning;

  std::size_t valid_count() const;
  double mean() const;  // over valid folds; NaN if none
};

/// Filtered repeated cross-validation. Fold filter seeds derive from
/// (plan.seed, repetition, fold), so results do not depend on `workers`.
FoldAucs filtered_evaluate(const WeightedDataset& ds, const FilterSpec& filter, const ClassifierConfig& classifier,
                           const CvPlan& plan, unsigned workers = 1);

/// Pairs of fold AUCs valid in both samples.
Comparison compare_cells(const FoldAucs& a, const FoldAucs& b, SignificanceMethod method, const CvPlan& plan);

struct EvalCell {
  std::string attack_type;
  std::string filter;
  std::string t_x;
  std::string t_g;
  bool variable_tx = false;
  std::size_t rows = 0;
  double positive_density = 0;
  double mean_auc = 0;
  std::vector<double> fold_aucs;
  std::size_t invalid_folds = 0;
  bool best = false;
  std::string error;
};

struct ComparisonRow {
  std::string attack_type;
  std::string t_x;
  std::string t_g;
  std::string filter_a;
  std::string filter_b;
  std::string method;
  Comparison result;
};

struct ImportanceRow {
  std::string attack_type;
  std::string t_x;
  std::string t_g;
  SignalImportance signal;
  int cfs_count = -1;  // folds selecting the signal; -1 when CFS was not run
};

struct EvalReport {
  std::vector<EvalCell> cells;
  std::vector<ComparisonRow> comparisons;
  std::vector<ImportanceRow> importance;
  std::vector<std::string> t_x_order;  // grid order, for plot data
  std::vector<std::string> t_g_order;
};

struct SweepConfig {
  std::vector<std::string> attack_types;
  std::vector<GranularityPair> grid = default_grid();
  std::vector<FilterSpec> filters;
  ClassifierConfig classifier;
  CvPlan plan;
  SignificanceMethod significance = SignificanceMethod::kCorrectedResampledT;
  TimelineOptions timeline;
  Instant gt_start;
  Instant gt_end;
  bool variable_tx_pass = true;
  bool cfs = true;
  CfsOptions cfs_options;
  unsigned workers = 1;
};

/// Full cross product of attack types, granularity pairs and filters. Each
/// cell's failure is recorded in the cell and the sweep continues. The first
/// filter is the baseline for comparisons, importance and the variable-t_x
/// pass.
EvalReport sweep(const EventTimeline& timeline, const SweepConfig& config);

/// cells.csv, comparisons.csv, importance.csv and plot-data CSVs in `dir`.
void write_report(const EvalReport& report, const std::string& dir);
/// Reads cells.csv, comparisons.csv and (if present) importance.csv.
EvalReport read_report(const std::string& dir);

/// Plot layout: one row per t_x, one column per t_g series (mean AUC).
std::vector<std::vector<std::string>> tx_tg_plot(const EvalReport& report, const std::string& attack_type,
                                                 const std::string& filter);

/// Human-readable summary: best cells, filter ranking with significance
/// markers, and top signals by discriminativeness.
std::string summarize_report(const EvalReport& report);

}  // namespace signalcast
