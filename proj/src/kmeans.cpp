#include "emato/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "emato/rng.hpp"

namespace emato::algos {

namespace {

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

std::vector<std::vector<int>> KmeansResult::clusters(int k) const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    out[static_cast<std::size_t>(assignment[i])].push_back(static_cast<int>(i));
  }
  return out;
}

KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (points.empty()) throw std::invalid_argument("kmeans: no points");
  const int p = static_cast<int>(points.size());
  const std::size_t dim = points[0].size();
  for (const auto& pt : points) {
    if (pt.size() != dim) throw std::invalid_argument("kmeans: ragged points");
  }

  KmeansResult res;
  res.centroids.assign(static_cast<std::size_t>(k), {});
  if (k >= p) {
    res.assignment.resize(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
      res.assignment[static_cast<std::size_t>(i)] = i;
      res.centroids[static_cast<std::size_t>(i)] = points[static_cast<std::size_t>(i)];
    }
    return res;
  }

  Rng rng(seed);

  // k-means++ seeding.
  std::vector<std::vector<double>> cent;
  cent.reserve(static_cast<std::size_t>(k));
  cent.push_back(points[rng.index(static_cast<std::size_t>(p))]);
  std::vector<double> d2(static_cast<std::size_t>(p));
  while (static_cast<int>(cent.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < p; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : cent) best = std::min(best, dist2(points[static_cast<std::size_t>(i)], c));
      d2[static_cast<std::size_t>(i)] = best;
      total += best;
    }
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng.index(static_cast<std::size_t>(p)));
    } else {
      const double u = rng.uniform01() * total;
      double cum = 0.0;
      pick = p - 1;
      for (int i = 0; i < p; ++i) {
        cum += d2[static_cast<std::size_t>(i)];
        if (cum >= u) {
          pick = i;
          break;
        }
      }
    }
    cent.push_back(points[static_cast<std::size_t>(pick)]);
  }

  std::vector<int> assign(static_cast<std::size_t>(p), 0);
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int iter = 1; iter <= 100; ++iter) {
    res.iterations = iter;

    // Assignment; ties go to the lowest cluster index.
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int i = 0; i < p; ++i) {
      int best = 0;
      double best_d = dist2(points[static_cast<std::size_t>(i)], cent[0]);
      for (int c = 1; c < k; ++c) {
        const double d = dist2(points[static_cast<std::size_t>(i)], cent[static_cast<std::size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assign[static_cast<std::size_t>(i)] = best;
      ++sizes[static_cast<std::size_t>(best)];
    }

    // Repair empty clusters: steal the farthest point from the largest one.
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] != 0) continue;
      int donor = 0;
      for (int d = 1; d < k; ++d) {
        if (sizes[static_cast<std::size_t>(d)] > sizes[static_cast<std::size_t>(donor)]) donor = d;
      }
      if (sizes[static_cast<std::size_t>(donor)] <= 1) continue;
      int steal = -1;
      double steal_d = -1.0;
      for (int i = 0; i < p; ++i) {
        if (assign[static_cast<std::size_t>(i)] != donor) continue;
        const double d = dist2(points[static_cast<std::size_t>(i)], cent[static_cast<std::size_t>(donor)]);
        if (d > steal_d) {
          steal_d = d;
          steal = i;
        }
      }
      assign[static_cast<std::size_t>(steal)] = c;
      --sizes[static_cast<std::size_t>(donor)];
      ++sizes[static_cast<std::size_t>(c)];
    }

    // Centroid update.
    std::vector<std::vector<double>> next(static_cast<std::size_t>(k),
                                          std::vector<double>(dim, 0.0));
    for (int i = 0; i < p; ++i) {
      auto& acc = next[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
      const auto& pt = points[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < dim; ++j) acc[j] += pt[j];
    }
    double movement = 0.0;
    for (int c = 0; c < k; ++c) {
      auto& acc = next[static_cast<std::size_t>(c)];
      const double count = static_cast<double>(sizes[static_cast<std::size_t>(c)]);
      if (count == 0.0) continue;  // only possible when repair had no donor
      for (std::size_t j = 0; j < dim; ++j) acc[j] /= count;
      movement = std::max(movement, std::sqrt(dist2(acc, cent[static_cast<std::size_t>(c)])));
      cent[static_cast<std::size_t>(c)] = acc;
    }
    if (movement < 1e-9) break;
  }

  res.assignment = std::move(assign);
  for (int c = 0; c < k; ++c) {
    if (sizes[static_cast<std::size_t>(c)] > 0) {
      res.centroids[static_cast<std::size_t>(c)] = cent[static_cast<std::size_t>(c)];
    }
  }
  return res;
}

}  // namespace emato::algos
