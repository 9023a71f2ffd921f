#include "signalcast/discretizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "signalcast/error.hpp"

namespace signalcast {

DiscretizeStrategy parse_discretize_strategy(std::string_view text) {
  if (text == "median") return DiscretizeStrategy::kMedian;
  if (text == "entropy") return DiscretizeStrategy::kEntropy;
  if (text == "mdl") return DiscretizeStrategy::kMdl;
  throw_config("unknown discretizer strategy '" + std::string(text) + "'");
}

const char* discretize_strategy_name(DiscretizeStrategy s) {
  switch (s) {
    case DiscretizeStrategy::kMedian:
      return "median";
    case DiscretizeStrategy::kEntropy:
      return "entropy";
    case DiscretizeStrategy::kMdl:
      return "mdl";
  }
  return "median";
}

namespace {

std::vector<std::size_t> sorted_order(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

double binary_entropy(double w0, double w1) {
  const double t = w0 + w1;
  if (t <= 0) return 0.0;
  double h = 0;
  for (double w : {w0, w1}) {
    if (w > 0) {
      const double p = w / t;
      h -= p * std::log2(p);
    }
  }
  return h;
}

}  // namespace

double weighted_median(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw_input("weighted median of an empty column");
  const auto order = sorted_order(values);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double cum = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    cum += weights[order[i]];
    const bool last_of_value = i + 1 == order.size() || values[order[i + 1]] != values[order[i]];
    if (last_of_value && cum >= 0.5 * total) return values[order[i]];
  }
  return values[order.back()];
}

SplitChoice best_entropy_split(std::span<const double> values, std::span<const int> labels,
                               std::span<const double> weights) {
  if (values.empty()) throw_input("entropy split of an empty column");
  const auto order = sorted_order(values);
  double total[2] = {0, 0};
  for (std::size_t i = 0; i < values.size(); ++i) total[labels[i]] += weights[i];
  const double parent = binary_entropy(total[0], total[1]);
  const double all = total[0] + total[1];

  SplitChoice best{values[order.back()], 0.0};
  bool found = false;
  double left[2] = {0, 0};
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    left[labels[order[i]]] += weights[order[i]];
    const double v = values[order[i]];
    const double next = values[order[i + 1]];
    if (next == v) continue;
    const double wl = left[0] + left[1];
    const double wr = all - wl;
    const double cond = (wl / all) * binary_entropy(left[0], left[1]) +
                        (wr / all) * binary_entropy(total[0] - left[0], total[1] - left[1]);
    const double gain = parent - cond;
    if (!found || gain > best.gain) {
      best = SplitChoice{0.5 * (v + next), gain};
      found = true;
    }
  }
  return best;
}

bool mdl_accepts(std::span<const double> values, std::span<const int> labels, std::span<const double> weights,
                 const SplitChoice& split) {
  double total[2] = {0, 0};
  double left[2] = {0, 0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    total[labels[i]] += weights[i];
    if (values[i] <= split.threshold) left[labels[i]] += weights[i];
  }
  const double right[2] = {total[0] - left[0], total[1] - left[1]};
  const double n = total[0] + total[1];
  const double nl = left[0] + left[1];
  if (!(n > 1) || nl <= 0 || nl >= n) return false;
  auto classes = [](const double* w) { return static_cast<double>((w[0] > 0) + (w[1] > 0)); };
  const double k = classes(total), k1 = classes(left), k2 = classes(right);
  const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                       (k * binary_entropy(total[0], total[1]) - k1 * binary_entropy(left[0], left[1]) -
                        k2 * binary_entropy(right[0], right[1]));
  return split.gain > (std::log2(n - 1) + delta) / n;
}

Discretizer::Discretizer(std::vector<std::string> names, std::vector<double> thresholds)
    : names_(std::move(names)), thresholds_(std::move(thresholds)) {
  if (names_.size() != thresholds_.size()) throw_input("discretizer needs one threshold per signal");
}

Discretizer Discretizer::fit(const WeightedDataset& train, DiscretizeStrategy strategy) {
  if (train.empty()) throw_input("cannot fit a discretizer on an empty dataset");
  if (train.discrete()) throw_input("cannot fit a discretizer on already-discrete data");
  const std::size_t n = train.size();
  std::vector<double> weights(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = train.row(i).weight;
    labels[i] = train.row(i).label;
  }
  std::vector<double> thresholds;
  std::vector<double> column(n);
  for (std::size_t c = 0; c < train.arity(); ++c) {
    for (std::size_t i = 0; i < n; ++i) column[i] = train.row(i).features[c];
    double t = weighted_median(column, weights);
    if (strategy == DiscretizeStrategy::kEntropy) {
      const auto split = best_entropy_split(column, labels, weights);
      if (split.gain > 0) t = split.threshold;
    } else if (strategy == DiscretizeStrategy::kMdl) {
      const auto split = best_entropy_split(column, labels, weights);
      t = mdl_accepts(column, labels, weights, split) ? split.threshold
                                                      : *std::max_element(column.begin(), column.end());
    }
    thresholds.push_back(t);
  }
  return Discretizer(train.signal_names(), std::move(thresholds));
}

std::vector<double> Discretizer::apply(std::span<const double> features) const {
  if (features.size() != thresholds_.size()) throw_input("feature count does not match discretizer");
  std::vector<double> out(features.size());
  for (std::size_t c = 0; c < features.size(); ++c) out[c] = bin(c, features[c]);
  return out;
}

WeightedDataset Discretizer::apply(const WeightedDataset& ds) const {
  if (ds.signal_names() != names_) throw_input("dataset schema does not match discretizer");
  if (ds.discrete()) return ds;
  std::vector<InstanceRow> rows;
  rows.reserve(ds.size());
  for (const auto& r : ds.rows()) rows.push_back(InstanceRow{apply(r.features), r.label, r.weight});
  return ds.with_rows(std::move(rows), true);
}

}  // namespace signalcast
