#pragma once

#include <cstdint>
#include <vector>

namespace emato::algos {

struct KmeansResult {
  std::vector<int> assignment;                 // one cluster id per point
  std::vector<std::vector<double>> centroids;  // empty vector = empty cluster
  int iterations = 0;

  std::vector<std::vector<int>> clusters(int k) const;
};

// Lloyd's algorithm with k-means++ seeding from a dedicated stream. Runs at
// most 100 iterations or until the largest centroid movement drops below
// 1e-9. Empty clusters are repaired by stealing the farthest point from the
// largest cluster. With k >= #points every point becomes its own cluster and
// the remaining clusters stay empty. Deterministic in (points, k, seed).
KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    std::uint64_t seed);

}  // namespace emato::algos
