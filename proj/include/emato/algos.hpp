#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "emato/bench.hpp"
#include "emato/eacore.hpp"
#include "emato/ktrn.hpp"
#include "emato/rng.hpp"

namespace emato::algos {

enum class Algorithm { MFEA, EMATO_MKT, MATDE, ST_DE };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);

struct AlgoConfig {
  Algorithm algorithm = Algorithm::ST_DE;
  std::uint64_t seed = 1;

  int pop_size_per_task = 50;
  long max_evals_per_task = 20000;

  // Variation operators.
  double f = 0.5;
  double cr = 0.9;
  double eta_c = 2.0;
  double eta_m = 5.0;
  double p_m = 0.0;  // <= 0 means 1/D at run time

  // MFEA.
  double rmp = 0.3;
  int mfea_population_cap = 1000;

  // Cluster-guided transfer.
  int k_clusters = 5;
  int n_assist = 5;
  int transfer_interval = 1;
  double elite_fraction = 0.2;

  // Archive-based transfer with reward/punishment.
  double tp0 = 0.1;
  double tp_min = 0.05;
  double tp_max = 0.7;
  double shrink = 0.8;
  double expand = 1.25;
  int archive_capacity = 300;

  // Throws ConfigError on invalid values for the configured algorithm.
  void validate(int n_tasks) const;
};

// Diagonal-Gaussian summary of a set of genomes; variances are floored at
// 1e-12 so divergences stay finite.
struct GaussianSummary {
  std::vector<double> mean;
  std::vector<double> variance;
};

GaussianSummary fit_gaussian(const std::vector<const eacore::Genome*>& genomes);
eacore::Genome sample_gaussian(const GaussianSummary& s, Rng& rng);  // clamped

// Symmetrized (Jeffreys) divergence KL(a||b) + KL(b||a) between diagonal
// Gaussians; unit-variance means (0,0) vs (1,0) give exactly 1.
double symmetrized_kld(const GaussianSummary& a, const GaussianSummary& b);

// Reward/punishment update of a per-task transfer probability.
double tp_update(double tp, bool success, const AlgoConfig& cfg);

struct RunResult {
  // Row r = per-task best-so-far after r generations (row 0 = after init).
  std::vector<std::vector<double>> best_by_generation;
  // Cumulative objective evaluations over all tasks, same indexing.
  std::vector<std::uint64_t> evals_by_generation;
  std::vector<double> final_best;
  std::vector<long> eval_counts;
  int generations = 0;
  double wall_clock_seconds = 0.0;
};

RunResult run_mfea(const bench::ProblemSet& problem, const AlgoConfig& cfg,
                   ktrn::Recorder& recorder);
RunResult run_emato_mkt(const bench::ProblemSet& problem, const AlgoConfig& cfg,
                        ktrn::Recorder& recorder);
RunResult run_matde(const bench::ProblemSet& problem, const AlgoConfig& cfg,
                    ktrn::Recorder& recorder);
RunResult run_st_de(const bench::ProblemSet& problem, const AlgoConfig& cfg,
                    ktrn::Recorder& recorder);

// Validates and dispatches on cfg.algorithm.
RunResult run_algorithm(const bench::ProblemSet& problem, const AlgoConfig& cfg,
                        ktrn::Recorder& recorder);

}  // namespace emato::algos
