#include "signalcast/cv.hpp"

#include <algorithm>
#include <numeric>

#include "signalcast/error.hpp"
#include "signalcast/rng.hpp"

namespace signalcast {

void CvPlan::validate() const {
  if (folds < 2) throw_config("cross-validation needs at least 2 folds");
  if (repetitions < 1) throw_config("cross-validation needs at least 1 repetition");
}

CvSplits stratified_folds(const WeightedDataset& ds, const CvPlan& plan) {
  plan.validate();
  const auto k = static_cast<std::size_t>(plan.folds);
  if (ds.size() < k) {
    throw_input("dataset has " + std::to_string(ds.size()) + " rows, fewer than " + std::to_string(k) + " folds");
  }
  CvSplits out;
  const std::size_t s_min = std::min(ds.class_count(0), ds.class_count(1));
  if (plan.stratified && s_min < k) {
    out.warning = "minority class has " + std::to_string(s_min) + " rows for " + std::to_string(k) +
                  " folds; some test folds lack it";
  }

  for (int rep = 0; rep < plan.repetitions; ++rep) {
    std::vector<std::size_t> order(ds.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(rep)));
    rng.shuffle(order.begin(), order.end());

    std::vector<std::size_t> fold_of(ds.size());
    std::size_t counter = 0;
    if (plan.stratified) {
      // Minority first so its rows start at fold 0.
      const int first = ds.class_count(1) <= ds.class_count(0) ? 1 : 0;
      for (int label : {first, 1 - first}) {
        for (auto i : order) {
          if (ds.row(i).label == label) fold_of[i] = counter++ % k;
        }
      }
    } else {
      for (auto i : order) fold_of[i] = counter++ % k;
    }

    std::vector<FoldSplit> folds(k);
    for (std::size_t i = 0; i < ds.size(); ++i) {
      for (std::size_t f = 0; f < k; ++f) {
        (fold_of[i] == f ? folds[f].test : folds[f].train).push_back(i);
      }
    }
    out.repetitions.push_back(std::move(folds));
  }
  return out;
}

}  // namespace signalcast
