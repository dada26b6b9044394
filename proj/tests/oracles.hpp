#pragma once

// Brute-force graph oracles for checking the metric implementations. These
// deliberately use different algorithms from the library (Floyd-Warshall vs
// BFS, neighbor-pair enumeration vs matrix lookups, union-find vs BFS
// components, literal two-list Pearson vs moment sums).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "emato/ktrn.hpp"
#include "emato/rng.hpp"

namespace oracles {

inline emato::ktrn::GenerationGraph random_digraph(int n, double edge_prob,
                                                   std::uint64_t seed) {
  emato::Rng rng(seed);
  std::vector<int> counts(static_cast<std::size_t>(n) * n, 0);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      if (rng.uniform01() < edge_prob) {
        counts[static_cast<std::size_t>(s) * n + t] = 1 + static_cast<int>(rng.index(3));
      }
    }
  }
  return emato::ktrn::GenerationGraph(0, n, std::move(counts));
}

inline std::vector<std::vector<bool>> undirected_matrix(
    const emato::ktrn::GenerationGraph& g) {
  const int n = g.n();
  std::vector<std::vector<bool>> m(static_cast<std::size_t>(n),
                                   std::vector<bool>(static_cast<std::size_t>(n), false));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && (g.has_edge(u, v) || g.has_edge(v, u))) {
        m[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
      }
    }
  }
  return m;
}

inline double density(const emato::ktrn::GenerationGraph& g) {
  int edges = 0;
  for (int s = 0; s < g.n(); ++s) {
    for (int t = 0; t < g.n(); ++t) {
      if (s != t && g.has_edge(s, t)) ++edges;
    }
  }
  return static_cast<double>(edges) / (static_cast<double>(g.n()) * (g.n() - 1));
}

inline std::optional<double> diameter(const emato::ktrn::GenerationGraph& g) {
  const int n = g.n();
  const auto und = undirected_matrix(g);
  constexpr int kInf = 1 << 20;
  std::vector<std::vector<int>> d(static_cast<std::size_t>(n),
                                  std::vector<int>(static_cast<std::size_t>(n), kInf));
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (und[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            std::min(d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                     d[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +
                         d[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
      }
    }
  }
  int longest = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] >= kInf) {
        return std::nullopt;
      }
      longest = std::max(longest, d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  return static_cast<double>(longest);
}

inline double clustering(const emato::ktrn::GenerationGraph& g) {
  const int n = g.n();
  const auto und = undirected_matrix(g);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<int> nb;
    for (int j = 0; j < n; ++j) {
      if (und[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) nb.push_back(j);
    }
    if (nb.size() < 2) continue;
    int links = 0;
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (und[static_cast<std::size_t>(nb[a])][static_cast<std::size_t>(nb[b])]) ++links;
      }
    }
    total += 2.0 * links /
             (static_cast<double>(nb.size()) * (static_cast<double>(nb.size()) - 1.0));
  }
  return total / n;
}

inline std::optional<double> assortativity(const emato::ktrn::GenerationGraph& g) {
  const int n = g.n();
  const auto und = undirected_matrix(g);
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      deg[static_cast<std::size_t>(i)] +=
          und[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ? 1 : 0;
    }
  }
  std::vector<double> xs, ys;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && und[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) {
        xs.push_back(deg[static_cast<std::size_t>(u)]);
        ys.push_back(deg[static_cast<std::size_t>(v)]);
      }
    }
  }
  if (xs.empty()) return std::nullopt;
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 1e-12 || syy <= 1e-12) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

inline std::optional<double> sac(const emato::ktrn::GenerationGraph& g) {
  const int n = g.n();
  const auto und = undirected_matrix(g);
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (und[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) {
        parent[static_cast<std::size_t>(find(u))] = find(v);
      }
    }
  }
  std::vector<int> size(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) ++size[static_cast<std::size_t>(find(i))];
  std::vector<long> edges(static_cast<std::size_t>(n), 0);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s != t && g.has_edge(s, t)) ++edges[static_cast<std::size_t>(find(s))];
    }
  }
  double total = 0.0;
  int m = 0;
  for (int r = 0; r < n; ++r) {
    if (find(r) != r || size[static_cast<std::size_t>(r)] < 2) continue;
    const double sz = size[static_cast<std::size_t>(r)];
    total += static_cast<double>(edges[static_cast<std::size_t>(r)]) / (sz * (sz - 1.0));
    ++m;
  }
  if (m == 0) return std::nullopt;
  return total / m;
}

inline std::optional<double> heterogeneity(const emato::ktrn::GenerationGraph& g) {
  const int n = g.n();
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s != t && g.has_edge(s, t)) {
        ++deg[static_cast<std::size_t>(s)];
        ++deg[static_cast<std::size_t>(t)];
      }
    }
  }
  const double mean = std::accumulate(deg.begin(), deg.end(), 0.0) / n;
  if (mean == 0.0) return std::nullopt;
  double var = 0.0;
  for (int d : deg) var += (d - mean) * (d - mean);
  return std::sqrt(var / n) / mean;
}

}  // namespace oracles
