#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "emato/algos.hpp"
#include "emato/bench.hpp"
#include "emato/errors.hpp"

namespace emato::harness {

// Where the task set comes from: a generated (set_id, dim, seed) triple or a
// serialized problem-set file.
struct ProblemSpec {
  std::optional<bench::SetId> set_id;
  int dim = 20;
  std::uint64_t seed = 1;
  std::string path;

  bench::ProblemSet materialize() const;
};

std::string problem_identity(const bench::ProblemSet& ps);

struct RunConfig {
  ProblemSpec problem;
  algos::AlgoConfig algo;
  int repeats = 1;
  std::string output_dir = "out";
  bool record_ktrn = true;
};

// Single JSON document; unknown keys are rejected so typos fail loudly.
RunConfig run_config_from_json(const std::string& text);
std::string to_json(const RunConfig& cfg);
RunConfig load_run_config(const std::string& path);

struct RunArtifacts {
  int run_id = 0;
  std::uint64_t seed = 0;
  algos::RunResult result;
  std::string trace_path;
  std::string ktrn_path;     // empty when recording was disabled
  std::string metrics_path;
};

// Executes `repeats` runs with seeds algo.seed, algo.seed+1, ... and writes
// per-run trace/transfer-network/metrics files plus a summary CSV. Output is
// byte-reproducible from (config, seed).
std::vector<RunArtifacts> run_experiment(const RunConfig& cfg);

struct SweepCell {
  int k_clusters = 0;
  int n_assist = 0;
  long best_total = 0;
  long worst_total = 0;
};

struct SweepReport {
  std::vector<SweepCell> cells;
  // per_task[task][cell] = (times best, times worst) over the repeats.
  std::vector<std::vector<std::pair<int, int>>> per_task;
  std::string counts_path;
  std::string grid_path;
  std::string raw_path;
};

// Runs every (K, N) combination with shared seeds; emits a metrics grid and
// a best/worst counting report. Exact ties award the lowest-indexed cell
// (cells enumerate K-major in the order given).
SweepReport sweep(const RunConfig& base, const std::vector<int>& k_values,
                  const std::vector<int>& n_values);

struct AlgoRuns {
  std::string label;
  std::string problem_identity;
  std::vector<algos::RunResult> runs;
};

struct Curve {
  std::string label;
  std::vector<double> evals;      // mean cumulative evaluations per row
  std::vector<double> mean_best;  // mean over runs of mean over tasks
};

// Mean-of-best-over-tasks vs cumulative evaluations, one curve per entry;
// writes compare_curves.csv and a self-contained compare_curves.svg.
std::vector<Curve> compare_convergence(const std::vector<AlgoRuns>& inputs,
                                       const std::string& output_dir);

struct TraceData {
  std::vector<std::uint64_t> evals;
  std::vector<std::vector<double>> best;  // row per generation, column per task
};

TraceData read_trace_csv(const std::string& path);

}  // namespace emato::harness
