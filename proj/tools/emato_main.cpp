// Command-line front end: generate benchmark task sets, run the optimizers,
// sweep the cluster/assist grid, recompute network metrics, and compare
// convergence curves.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emato/algos.hpp"
#include "emato/bench.hpp"
#include "emato/errors.hpp"
#include "emato/harness.hpp"
#include "emato/ktrn.hpp"
#include "emato/netmetrics.hpp"

namespace {

using namespace emato;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      out.push_back(std::stoi(field));
    } catch (const std::exception&) {
      throw ConfigError("bad integer list: " + text);
    }
  }
  if (out.empty()) throw ConfigError("empty integer list: " + text);
  return out;
}

// "--problem" accepts either a set name (P1..P10) or a path to a problem
// JSON file.
void apply_problem(harness::RunConfig& cfg, const std::string& problem) {
  if (!problem.empty() && problem[0] == 'P' && problem.size() <= 3) {
    cfg.problem.set_id = bench::set_from_name(problem);
    cfg.problem.path.clear();
  } else {
    cfg.problem.path = problem;
  }
}

struct CommonFlags {
  std::string config;
  std::string problem;
  std::string algo;
  std::uint64_t seed = 0;
  std::uint64_t problem_seed = 0;
  int dim = 0;
  int repeats = 0;
  long evals = 0;
  int pop = 0;
  std::string out;
  int k = 0;
  int n = 0;
  double rmp = -1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON config file; flags override its fields");
    cmd->add_option("--problem", problem, "set name P1..P10 or problem JSON path");
    cmd->add_option("--algo", algo, "mfea | mkt | matde | stde");
    cmd->add_option("--seed", seed, "master seed for the optimizer");
    cmd->add_option("--problem-seed", problem_seed, "seed for task-set generation");
    cmd->add_option("--dim", dim, "task dimension for generated sets");
    cmd->add_option("--repeats", repeats, "independent runs");
    cmd->add_option("--evals", evals, "objective evaluations per task");
    cmd->add_option("--pop", pop, "subpopulation size per task");
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--k", k, "cluster count");
    cmd->add_option("--n", n, "auxiliary tasks per round");
    cmd->add_option("--rmp", rmp, "random mating probability");
  }

  harness::RunConfig resolve(const CLI::App* cmd) const {
    harness::RunConfig cfg;
    if (cmd->count("--config")) cfg = harness::load_run_config(config);
    if (cmd->count("--problem")) apply_problem(cfg, problem);
    if (cmd->count("--algo")) {
      const auto algorithm = algos::algorithm_from_name(algo);
      if (!algorithm) throw ConfigError("unknown algorithm: " + algo);
      cfg.algo.algorithm = *algorithm;
    }
    if (cmd->count("--seed")) cfg.algo.seed = seed;
    if (cmd->count("--problem-seed")) cfg.problem.seed = problem_seed;
    if (cmd->count("--dim")) cfg.problem.dim = dim;
    if (cmd->count("--repeats")) cfg.repeats = repeats;
    if (cmd->count("--evals")) cfg.algo.max_evals_per_task = evals;
    if (cmd->count("--pop")) cfg.algo.pop_size_per_task = pop;
    if (cmd->count("--out")) cfg.output_dir = out;
    if (cmd->count("--k")) cfg.algo.k_clusters = k;
    if (cmd->count("--n")) cfg.algo.n_assist = n;
    if (cmd->count("--rmp")) cfg.algo.rmp = rmp;
    return cfg;
  }
};

int run_cli(int argc, char** argv) {
  CLI::App app{"many-task evolutionary optimization with transfer-network analytics"};
  app.require_subcommand(1);

  // gen-problem
  auto* gen = app.add_subcommand("gen-problem", "generate a task set as JSON");
  std::string gen_set = "P1";
  int gen_dim = 20;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "problem.json";
  gen->add_option("--problem", gen_set, "set name P1..P10")->required();
  gen->add_option("--dim", gen_dim, "task dimension");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out, "output file");

  // run
  auto* run = app.add_subcommand("run", "run one experiment");
  CommonFlags run_flags;
  run_flags.add_to(run);
  bool no_ktrn = false;
  run->add_flag("--no-ktrn", no_ktrn, "skip writing transfer-network files");

  // sweep
  auto* sw = app.add_subcommand("sweep", "K/N grid sweep with counting report");
  CommonFlags sweep_flags;
  sweep_flags.add_to(sw);
  std::string sweep_k = "3,5,10";
  std::string sweep_n = "3,5,10";
  sw->add_option("--k-grid", sweep_k, "comma list of cluster counts");
  sw->add_option("--n-grid", sweep_n, "comma list of auxiliary-task counts");

  // metrics
  auto* met = app.add_subcommand("metrics", "recompute metrics from a KTRN file");
  std::string met_in;
  std::string met_out = "metrics.csv";
  int met_run_id = 0;
  met->add_option("--ktrn", met_in, "transfer-network JSONL file")->required();
  met->add_option("--out", met_out, "output CSV");
  met->add_option("--run-id", met_run_id, "run id column value");

  // compare
  auto* cmp = app.add_subcommand("compare", "convergence curves for several algorithms");
  CommonFlags cmp_flags;
  cmp_flags.add_to(cmp);
  std::string cmp_algos = "stde,mkt";
  cmp->add_option("--algos", cmp_algos, "comma list of algorithms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (gen->parsed()) {
    const auto ps = bench::generate_problem_set(bench::set_from_name(gen_set),
                                                gen_dim, gen_seed);
    bench::save_problem_set(ps, gen_out);
    std::cout << "wrote " << gen_out << " (" << ps.task_count() << " tasks, dim "
              << ps.dim << ")\n";
    return 0;
  }

  if (run->parsed()) {
    harness::RunConfig cfg = run_flags.resolve(run);
    if (no_ktrn) cfg.record_ktrn = false;
    const auto artifacts = harness::run_experiment(cfg);
    for (const auto& art : artifacts) {
      double mean = 0.0;
      for (double v : art.result.final_best) mean += v;
      mean /= static_cast<double>(art.result.final_best.size());
      std::printf("run %d seed %llu: %d generations, mean best %.6g\n", art.run_id,
                  static_cast<unsigned long long>(art.seed), art.result.generations,
                  mean);
    }
    std::cout << "outputs in " << cfg.output_dir << "\n";
    return 0;
  }

  if (sw->parsed()) {
    harness::RunConfig cfg = sweep_flags.resolve(sw);
    const auto report =
        harness::sweep(cfg, parse_int_list(sweep_k), parse_int_list(sweep_n));
    std::cout << "cell,best_total,worst_total\n";
    for (const auto& cell : report.cells) {
      std::cout << "K" << cell.k_clusters << "_N" << cell.n_assist << ','
                << cell.best_total << ',' << cell.worst_total << "\n";
    }
    std::cout << "counting report: " << report.counts_path << "\n";
    std::cout << "metrics grid:    " << report.grid_path << "\n";
    return 0;
  }

  if (met->parsed()) {
    const auto graphs = ktrn::read_jsonl(met_in);
    std::vector<netmetrics::MetricsRecord> records;
    records.reserve(graphs.size());
    for (const auto& g : graphs) records.push_back(netmetrics::compute_all(g));
    std::ofstream out(met_out, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + met_out);
    netmetrics::write_metrics_csv(out, met_run_id, records);
    std::cout << "wrote " << met_out << " (" << records.size() << " generations)\n";
    return 0;
  }

  if (cmp->parsed()) {
    harness::RunConfig cfg = cmp_flags.resolve(cmp);
    const auto problem = cfg.problem.materialize();
    const std::string identity = harness::problem_identity(problem);
    std::vector<harness::AlgoRuns> inputs;
    for (const auto& name : [&] {
           std::vector<std::string> names;
           std::istringstream in(cmp_algos);
           std::string field;
           while (std::getline(in, field, ',')) names.push_back(field);
           return names;
         }()) {
      const auto algorithm = algos::algorithm_from_name(name);
      if (!algorithm) throw ConfigError("unknown algorithm: " + name);
      harness::AlgoRuns entry;
      entry.label = name;
      entry.problem_identity = identity;
      const int repeats = std::max(1, cfg.repeats);
      for (int r = 0; r < repeats; ++r) {
        algos::AlgoConfig acfg = cfg.algo;
        acfg.algorithm = *algorithm;
        acfg.seed = cfg.algo.seed + static_cast<std::uint64_t>(r);
        acfg.validate(problem.task_count());
        ktrn::Recorder recorder(problem.task_count());
        entry.runs.push_back(algos::run_algorithm(problem, acfg, recorder));
      }
      inputs.push_back(std::move(entry));
    }
    harness::compare_convergence(inputs, cfg.output_dir);
    std::cout << "curves in " << cfg.output_dir << "\n";
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const emato::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
