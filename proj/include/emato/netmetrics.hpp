#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "emato/ktrn.hpp"

namespace emato::netmetrics {

// Structural metrics of one per-generation transfer network. Metrics that
// are undefined for the graph at hand (fragmented, degree-regular, empty)
// carry an explicit not-applicable state instead of a sentinel value.
struct MetricsRecord {
  double density = 0.0;
  double clustering = 0.0;
  std::optional<double> diameter;
  std::optional<double> assortativity;
  std::optional<double> sac;
  std::optional<double> heterogeneity;
  int components = 0;  // weakly connected components with >= 2 nodes
};

enum class DensityConvention {
  // Distinct directed edges over n(n-1); each directed edge counts once
  // (e.g. 250 edges on 50 nodes -> 0.102).
  DirectedSimple,
  // Literal 2|E|/(n(n-1)) with |E| the distinct directed edge count.
  Factor2,
};

// Requires n >= 2.
double density(const ktrn::GenerationGraph& g,
               DensityConvention convention = DensityConvention::DirectedSimple);

// Longest shortest path on the underlying undirected simple graph; NA when
// that graph is disconnected (isolated nodes count as disconnection).
std::optional<double> diameter(const ktrn::GenerationGraph& g);

// Mean over all n nodes of C_i = 2*T_i / (deg_i*(deg_i-1)) on the underlying
// undirected simple graph, with C_i = 0 for deg_i < 2.
double clustering_coefficient(const ktrn::GenerationGraph& g);

// Degree assortativity: Pearson correlation of endpoint total degrees over
// the undirected simple edges, each edge contributing both orientations.
// NA when there are no edges or the endpoint degrees have zero variance.
std::optional<double> assortativity(const ktrn::GenerationGraph& g);

// Mean internal directed-edge density over weakly connected components with
// at least two nodes; NA when no such component exists.
std::optional<double> subgraph_average_connectivity(const ktrn::GenerationGraph& g);

// Coefficient of variation sigma/<k> of total degrees (in+out on the simple
// digraph) over all n nodes, population standard deviation; NA when <k> = 0.
std::optional<double> heterogeneity(const ktrn::GenerationGraph& g);

int nonsingleton_component_count(const ktrn::GenerationGraph& g);

MetricsRecord compute_all(const ktrn::GenerationGraph& g);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  int defined = 0;
  int total = 0;
};

struct AggregateReport {
  MetricSummary density;
  MetricSummary clustering;
  MetricSummary diameter;
  MetricSummary assortativity;
  MetricSummary sac;
  MetricSummary heterogeneity;
};

AggregateReport aggregate(std::span<const MetricsRecord> records);

// "0.102 (0.000)" at three decimals; "~" when nothing was defined.  With
// `na_as_zero` an all-NA cell prints as zeros instead (the zeros-for-
// undefined convention some reports want for assortativity).
std::string format_cell(const MetricSummary& s, bool na_as_zero = false);

// CSV with columns run_id,generation,D,C,DIA,A,SAC,H,components; NA cells
// are left empty, numbers are written at full double precision.
void write_metrics_csv(std::ostream& out, int run_id,
                       std::span<const MetricsRecord> records);

}  // namespace emato::netmetrics
