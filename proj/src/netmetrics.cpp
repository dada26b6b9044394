#include "emato/netmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>

namespace emato::netmetrics {

namespace {

// Neighbor lists of the underlying undirected simple graph.
std::vector<std::vector<int>> undirected_adjacency(const ktrn::GenerationGraph& g) {
  const int n = g.n();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (g.has_edge(u, v) || g.has_edge(v, u)) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
      }
    }
  }
  return adj;
}

// BFS distances; unreachable nodes stay at -1.
std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<int> q;
  dist[static_cast<std::size_t>(start)] = 0;
  q.push(start);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

// Component label per node on the undirected view.
std::vector<int> weak_components(const std::vector<std::vector<int>>& adj) {
  std::vector<int> label(adj.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (label[static_cast<std::size_t>(v)] < 0) {
          label[static_cast<std::size_t>(v)] = next;
          q.push(static_cast<std::size_t>(v));
        }
      }
    }
    ++next;
  }
  return label;
}

std::vector<int> total_degrees(const ktrn::GenerationGraph& g) {
  const int n = g.n();
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (g.has_edge(s, t)) {
        ++deg[static_cast<std::size_t>(s)];
        ++deg[static_cast<std::size_t>(t)];
      }
    }
  }
  return deg;
}

}  // namespace

double density(const ktrn::GenerationGraph& g, DensityConvention convention) {
  const int n = g.n();
  if (n < 2) throw std::invalid_argument("density: need at least two nodes");
  const double pairs = static_cast<double>(n) * (n - 1);
  const double edges = g.distinct_edge_count();
  return convention == DensityConvention::DirectedSimple ? edges / pairs
                                                         : 2.0 * edges / pairs;
}

std::optional<double> diameter(const ktrn::GenerationGraph& g) {
  if (g.n() < 2) throw std::invalid_argument("diameter: need at least two nodes");
  const auto adj = undirected_adjacency(g);
  int longest = 0;
  for (int s = 0; s < g.n(); ++s) {
    const auto dist = bfs_distances(adj, s);
    for (int d : dist) {
      if (d < 0) return std::nullopt;  // disconnected
      longest = std::max(longest, d);
    }
  }
  return static_cast<double>(longest);
}

double clustering_coefficient(const ktrn::GenerationGraph& g) {
  const int n = g.n();
  const auto adj = undirected_adjacency(g);
  // Matrix lookup keeps the triangle scan simple at this scale.
  std::vector<char> und(static_cast<std::size_t>(n) * n, 0);
  for (int u = 0; u < n; ++u) {
    for (int v : adj[static_cast<std::size_t>(u)]) {
      und[static_cast<std::size_t>(u) * n + v] = 1;
    }
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& nb = adj[static_cast<std::size_t>(i)];
    const std::size_t deg = nb.size();
    if (deg < 2) continue;
    int triangles = 0;
    for (std::size_t a = 0; a < deg; ++a) {
      for (std::size_t b = a + 1; b < deg; ++b) {
        triangles += und[static_cast<std::size_t>(nb[a]) * n + nb[b]];
      }
    }
    sum += 2.0 * triangles / (static_cast<double>(deg) * (static_cast<double>(deg) - 1.0));
  }
  return sum / n;
}

std::optional<double> assortativity(const ktrn::GenerationGraph& g) {
  const auto adj = undirected_adjacency(g);
  const int n = g.n();
  // Moment sums over oriented endpoint-degree pairs (each undirected edge
  // contributes both orientations, so the two marginals coincide).
  double m = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s12 = 0.0;
  for (int u = 0; u < n; ++u) {
    const double du = static_cast<double>(adj[static_cast<std::size_t>(u)].size());
    for (int v : adj[static_cast<std::size_t>(u)]) {
      const double dv = static_cast<double>(adj[static_cast<std::size_t>(v)].size());
      m += 1.0;
      s1 += du;
      s2 += du * du;
      s12 += du * dv;
    }
  }
  if (m == 0.0) return std::nullopt;
  const double mean = s1 / m;
  const double var = s2 / m - mean * mean;
  if (!(var > 1e-15)) return std::nullopt;  // degree-regular graph
  return (s12 / m - mean * mean) / var;
}

std::optional<double> subgraph_average_connectivity(const ktrn::GenerationGraph& g) {
  const int n = g.n();
  if (n < 2) throw std::invalid_argument("sac: need at least two nodes");
  const auto adj = undirected_adjacency(g);
  const auto label = weak_components(adj);
  const int count = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<int> sizes(static_cast<std::size_t>(count), 0);
  for (int l : label) ++sizes[static_cast<std::size_t>(l)];
  std::vector<long> edges(static_cast<std::size_t>(count), 0);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (g.has_edge(s, t)) ++edges[static_cast<std::size_t>(label[static_cast<std::size_t>(s)])];
    }
  }
  double sum = 0.0;
  int m = 0;
  for (int c = 0; c < count; ++c) {
    const double sz = sizes[static_cast<std::size_t>(c)];
    if (sz < 2) continue;
    sum += static_cast<double>(edges[static_cast<std::size_t>(c)]) / (sz * (sz - 1.0));
    ++m;
  }
  if (m == 0) return std::nullopt;
  return sum / m;
}

std::optional<double> heterogeneity(const ktrn::GenerationGraph& g) {
  const auto deg = total_degrees(g);
  double mean = 0.0;
  for (int d : deg) mean += d;
  mean /= static_cast<double>(deg.size());
  if (mean == 0.0) return std::nullopt;
  double var = 0.0;
  for (int d : deg) {
    const double diff = d - mean;
    var += diff * diff;
  }
  var /= static_cast<double>(deg.size());
  return std::sqrt(var) / mean;
}

int nonsingleton_component_count(const ktrn::GenerationGraph& g) {
  const auto adj = undirected_adjacency(g);
  const auto label = weak_components(adj);
  const int count = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<int> sizes(static_cast<std::size_t>(count), 0);
  for (int l : label) ++sizes[static_cast<std::size_t>(l)];
  int out = 0;
  for (int s : sizes) out += (s >= 2) ? 1 : 0;
  return out;
}

MetricsRecord compute_all(const ktrn::GenerationGraph& g) {
  MetricsRecord r;
  r.density = density(g);
  r.clustering = clustering_coefficient(g);
  r.diameter = diameter(g);
  r.assortativity = assortativity(g);
  r.sac = subgraph_average_connectivity(g);
  r.heterogeneity = heterogeneity(g);
  r.components = nonsingleton_component_count(g);
  return r;
}

namespace {

MetricSummary summarize(const std::vector<double>& values, int total) {
  MetricSummary s;
  s.total = total;
  s.defined = static_cast<int>(values.size());
  if (values.empty()) return s;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) {
    const double d = v - mean;
    var += d * d;
  }
  var /= static_cast<double>(values.size());
  s.mean = mean;
  s.stddev = std::sqrt(var);
  return s;
}

}  // namespace

AggregateReport aggregate(std::span<const MetricsRecord> records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  const int total = static_cast<int>(records.size());
  std::vector<double> d, c, dia, a, sac, h;
  for (const auto& r : records) {
    d.push_back(r.density);
    c.push_back(r.clustering);
    if (r.diameter) dia.push_back(*r.diameter);
    if (r.assortativity) a.push_back(*r.assortativity);
    if (r.sac) sac.push_back(*r.sac);
    if (r.heterogeneity) h.push_back(*r.heterogeneity);
  }
  AggregateReport rep;
  rep.density = summarize(d, total);
  rep.clustering = summarize(c, total);
  rep.diameter = summarize(dia, total);
  rep.assortativity = summarize(a, total);
  rep.sac = summarize(sac, total);
  rep.heterogeneity = summarize(h, total);
  return rep;
}

std::string format_cell(const MetricSummary& s, bool na_as_zero) {
  if (s.defined == 0 && !na_as_zero) return "~";
  char buf[64];
  const double mean = s.defined == 0 ? 0.0 : s.mean;
  const double stddev = s.defined == 0 ? 0.0 : s.stddev;
  std::snprintf(buf, sizeof(buf), "%.3f (%.3f)", mean, stddev);
  return buf;
}

void write_metrics_csv(std::ostream& out, int run_id,
                       std::span<const MetricsRecord> records) {
  out << "run_id,generation,D,C,DIA,A,SAC,H,components\n";
  char buf[40];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  const auto put_opt = [&](const std::optional<double>& v) {
    if (v) put(*v);
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out << run_id << ',' << i << ',';
    put(r.density);
    out << ',';
    put(r.clustering);
    out << ',';
    put_opt(r.diameter);
    out << ',';
    put_opt(r.assortativity);
    out << ',';
    put_opt(r.sac);
    out << ',';
    put_opt(r.heterogeneity);
    out << ',' << r.components << '\n';
  }
}

}  // namespace emato::netmetrics
