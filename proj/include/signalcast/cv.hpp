#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "signalcast/dataset.hpp"

namespace signalcast {

struct CvPlan {
  int folds = 10;
  int repetitions = 10;
  std::uint64_t seed = 1;
  bool stratified = true;

  void validate() const;
  /// Test rows / train rows for one fold, as used by the corrected t-test.
  double test_train_ratio() const { return 1.0 / static_cast<double>(folds - 1); }
};

struct FoldSplit {
  std::vector<std::size_t> train;  // ascending row indices
  std::vector<std::size_t> test;

  bool operator==(const FoldSplit&) const = default;
};

struct CvSplits {
  std::vector<std::vector<FoldSplit>> repetitions;
  std::string warning;  // set when a class has fewer rows than folds
};

/// Per repetition r: shuffle with a seed derived from (seed, r), then deal
/// each class round-robin over the folds, continuing the fold counter from
/// one class to the next.
CvSplits stratified_folds(const WeightedDataset& ds, const CvPlan& plan);

}  // namespace signalcast
