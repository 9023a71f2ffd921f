#include "signalcast/metrics.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "signalcast/error.hpp"

namespace signalcast {

double auc(std::span<const ScoredRow> rows) {
  double w_pos = 0, w_neg = 0;
  for (const auto& r : rows) {
    if (r.label == 1) {
      w_pos += r.weight;
    } else {
      w_neg += r.weight;
    }
  }
  if (!(w_pos > 0) || !(w_neg > 0)) throw_input("AUC is undefined without both classes");

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a].score < rows[b].score; });

  // Walk tie groups in ascending score; negatives strictly below each group
  // are fully outranked by the group's positives.
  double neg_below = 0;
  double sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double gp = 0, gn = 0;
    while (j < order.size() && rows[order[j]].score == rows[order[i]].score) {
      const auto& r = rows[order[j]];
      if (r.label == 1) {
        gp += r.weight;
      } else {
        gn += r.weight;
      }
      ++j;
    }
    sum += gp * neg_below + 0.5 * gp * gn;
    neg_below += gn;
    i = j;
  }
  return sum / (w_pos * w_neg);
}

SignificanceMethod parse_significance_method(std::string_view text) {
  if (text == "paired_t") return SignificanceMethod::kPairedT;
  if (text == "corrected_resampled_t") return SignificanceMethod::kCorrectedResampledT;
  throw_config("unknown significance method '" + std::string(text) + "'");
}

const char* significance_method_name(SignificanceMethod m) {
  return m == SignificanceMethod::kPairedT ? "paired_t" : "corrected_resampled_t";
}

double student_t_two_tailed_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

Comparison compare(std::span<const double> a, std::span<const double> b, SignificanceMethod method,
                   double test_train_ratio) {
  if (a.size() != b.size()) throw_input("paired comparison needs samples of equal length");
  const std::size_t n = a.size();
  if (n < 2) throw_input("paired comparison needs at least two pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);

  Comparison c;
  c.mean_difference = mean;
  const double factor = method == SignificanceMethod::kPairedT ? 1.0 / static_cast<double>(n)
                                                               : 1.0 / static_cast<double>(n) + test_train_ratio;
  if (var <= 0.0) {
    if (mean == 0.0) {
      c.t_statistic = 0.0;
      c.p_value = 1.0;
      c.significant = false;
    } else {
      c.t_statistic = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      c.p_value = 0.0;
      c.significant = true;
    }
    return c;
  }
  c.t_statistic = mean / std::sqrt(factor * var);
  c.p_value = student_t_two_tailed_p(c.t_statistic, static_cast<double>(n - 1));
  c.significant = c.p_value < 0.05;
  return c;
}

}  // namespace signalcast
