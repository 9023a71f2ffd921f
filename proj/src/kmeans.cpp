#include "signalcast/kmeans.hpp"

#include <limits>

#include "signalcast/error.hpp"
#include "signalcast/rng.hpp"

namespace signalcast {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace {

std::size_t nearest(const Point& p, const std::vector<Point>& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

ClusterResult kmeans(std::span<const Point> rows, std::size_t k, std::uint64_t seed, int max_iter) {
  if (k < 1) throw_config("k-means needs k >= 1");
  if (k > rows.size()) throw_input("k-means: k exceeds the number of rows");
  if (max_iter < 1) throw_config("k-means needs max_iter >= 1");
  const std::size_t n = rows.size();
  const std::size_t dim = rows.front().size();

  Rng rng(seed);
  ClusterResult out;
  out.centroids.push_back(rows[rng.below(n)]);
  std::vector<double> min_d(n, std::numeric_limits<double>::infinity());
  while (out.centroids.size() < k) {
    const Point& last = out.centroids.back();
    std::size_t far = 0;
    double far_d = -1;
    for (std::size_t i = 0; i < n; ++i) {
      min_d[i] = std::min(min_d[i], squared_distance(rows[i], last));
      if (min_d[i] > far_d) {
        far_d = min_d[i];
        far = i;
      }
    }
    out.centroids.push_back(rows[far]);
  }

  out.assignments.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) out.assignments[i] = nearest(rows[i], out.centroids);

  for (int it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    std::vector<Point> sums(k, Point(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sums[out.assignments[i]];
      for (std::size_t d = 0; d < dim; ++d) s[d] += rows[i][d];
      ++counts[out.assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < dim; ++d) out.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = nearest(rows[i], out.centroids);
      if (c != out.assignments[i]) {
        out.assignments[i] = c;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return out;
}

}  // namespace signalcast
