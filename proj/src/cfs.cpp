#include "signalcast/cfs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "signalcast/error.hpp"

namespace signalcast {

CorrelationMeasure parse_correlation_measure(std::string_view text) {
  if (text == "symmetrical_uncertainty" || text == "su") return CorrelationMeasure::kSymmetricalUncertainty;
  if (text == "pearson") return CorrelationMeasure::kPearson;
  throw_config("unknown correlation measure '" + std::string(text) + "'");
}

namespace {

double entropy_of(std::span<const double> w) {
  double total = 0;
  for (double v : w) total += v;
  if (total <= 0) return 0;
  double h = 0;
  for (double v : w) {
    if (v > 0) {
      const double p = v / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

double pearson(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
  double sw = 0, mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= sw;
  my /= sw;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    syy += w[i] * (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0 || syy <= 0) return 0;
  return std::abs(sxy / std::sqrt(sxx * syy));
}

}  // namespace

double symmetrical_uncertainty(std::span<const int> x, std::span<const int> y, std::span<const double> weights) {
  double joint[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < x.size(); ++i) joint[x[i]][y[i]] += weights[i];
  const double hx = entropy_of(std::vector<double>{joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]});
  const double hy = entropy_of(std::vector<double>{joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]});
  const double hxy = entropy_of(std::vector<double>{joint[0][0], joint[0][1], joint[1][0], joint[1][1]});
  if (hx + hy <= 0) return 0;
  const double info = hx + hy - hxy;
  return std::clamp(2.0 * info / (hx + hy), 0.0, 1.0);
}

double cfs_merit(std::size_t k, double mean_feature_class, double mean_feature_feature) {
  if (k == 0) return 0;
  const double kd = static_cast<double>(k);
  return kd * mean_feature_class / std::sqrt(kd + kd * (kd - 1) * mean_feature_feature);
}

std::vector<std::size_t> cfs_search(const WeightedDataset& train, const CfsOptions& options) {
  const std::size_t m = train.arity();
  if (m == 0 || train.empty()) return {};
  if (m > 63) throw_input("CFS search supports at most 63 signals");
  const std::size_t n = train.size();

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = train.row(i).weight;

  // Correlation matrix; index m is the class.
  std::vector<std::vector<double>> corr(m + 1, std::vector<double>(m + 1, 0.0));
  if (options.measure == CorrelationMeasure::kSymmetricalUncertainty) {
    WeightedDataset binned = train;
    if (!train.discrete()) binned = Discretizer::fit(train, options.discretize).apply(train);
    std::vector<std::vector<int>> cols(m + 1, std::vector<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < m; ++c) cols[c][i] = binned.row(i).features[c] == kHigh ? 1 : 0;
      cols[m][i] = binned.row(i).label;
    }
    for (std::size_t a = 0; a <= m; ++a) {
      for (std::size_t b = a + 1; b <= m; ++b) corr[a][b] = corr[b][a] = symmetrical_uncertainty(cols[a], cols[b], w);
    }
  } else {
    std::vector<std::vector<double>> cols(m + 1, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < m; ++c) cols[c][i] = train.row(i).features[c];
      cols[m][i] = train.row(i).label;
    }
    for (std::size_t a = 0; a <= m; ++a) {
      for (std::size_t b = a + 1; b <= m; ++b) corr[a][b] = corr[b][a] = pearson(cols[a], cols[b], w);
    }
  }

  auto merit = [&](std::uint64_t mask) {
    double rcf = 0, rff = 0;
    std::size_t k = 0;
    for (std::size_t a = 0; a < m; ++a) {
      if (!(mask >> a & 1U)) continue;
      ++k;
      rcf += corr[a][m];
      for (std::size_t b = a + 1; b < m; ++b) {
        if (mask >> b & 1U) rff += corr[a][b];
      }
    }
    if (k == 0) return 0.0;
    const double kd = static_cast<double>(k);
    const double pairs = kd * (kd - 1) / 2;
    return cfs_merit(k, rcf / kd, pairs > 0 ? rff / pairs : 0.0);
  };

  struct Node {
    double merit;
    std::uint64_t order;
    std::uint64_t mask;
  };
  auto worse = [](const Node& a, const Node& b) {
    if (a.merit != b.merit) return a.merit < b.merit;
    return a.order > b.order;
  };
  std::vector<Node> open{{0.0, 0, 0}};
  std::set<std::uint64_t> seen{0};
  std::uint64_t inserted = 1;
  std::uint64_t best_mask = 0;
  double best_merit = 0.0;
  int stale = 0;

  while (!open.empty() && stale < options.stale_limit) {
    auto it = std::max_element(open.begin(), open.end(), worse);
    const Node node = *it;
    open.erase(it);
    bool improved = false;
    for (std::size_t a = 0; a < m; ++a) {
      if (node.mask >> a & 1U) continue;
      const std::uint64_t child = node.mask | (std::uint64_t{1} << a);
      if (!seen.insert(child).second) continue;
      const double mc = merit(child);
      open.push_back({mc, inserted++, child});
      if (mc > best_merit + 1e-12) {
        best_merit = mc;
        best_mask = child;
        improved = true;
      }
    }
    stale = improved ? 0 : stale + 1;
  }

  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < m; ++a) {
    if (best_mask >> a & 1U) out.push_back(a);
  }
  return out;
}

std::vector<std::pair<std::string, int>> cfs_select(const WeightedDataset& ds, const CvPlan& plan,
                                                    const CfsOptions& options) {
  CvPlan p = plan;
  p.repetitions = std::max(1, options.repetitions);
  const auto splits = stratified_folds(ds, p);
  std::vector<std::pair<std::string, int>> counts;
  for (const auto& n : ds.signal_names()) counts.emplace_back(n, 0);
  for (const auto& rep : splits.repetitions) {
    for (const auto& fold : rep) {
      const auto train = ds.subset(fold.train);
      for (auto c : cfs_search(train, options)) ++counts[c].second;
    }
  }
  return counts;
}

}  // namespace signalcast
