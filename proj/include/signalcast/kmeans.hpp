#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace signalcast {

using Point = std::vector<double>;

struct ClusterResult {
  std::vector<std::size_t> assignments;  // row -> cluster id
  std::vector<Point> centroids;          // size k
  int iterations = 0;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Lloyd's algorithm with Euclidean distance. Initial centroids come from a
/// farthest-first traversal that starts at a seeded random row. Stops at an
/// assignment fixpoint or after max_iter rounds. Ties go to the lowest
/// centroid index; an empty cluster keeps its previous centroid.
ClusterResult kmeans(std::span<const Point> rows, std::size_t k, std::uint64_t seed, int max_iter);

}  // namespace signalcast
