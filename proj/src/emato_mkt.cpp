#include "emato/algos.hpp"
#include "emato/kmeans.hpp"
#include "algos_internal.hpp"

namespace emato::algos {

// Cluster-guided many-task optimization: tasks are grouped each transfer
// round by k-means over population summaries, every task then draws up to N
// auxiliary tasks from its own cluster and receives one elite-distribution
// sample from each, followed by one DE generation per subpopulation.
RunResult run_emato_mkt(const bench::ProblemSet& problem, const AlgoConfig& cfg,
                        ktrn::Recorder& recorder) {
  using namespace internal;
  const WallClock clock;
  const int n = problem.task_count();
  EvalContext ctx(problem, cfg.max_evals_per_task);
  Rng run_rng(cfg.seed);
  std::vector<Rng> task_rngs;
  task_rngs.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    task_rngs.push_back(run_rng.child(kTagTask + static_cast<std::uint64_t>(t)));
  }
  Rng transfer_rng = run_rng.child(kTagGlobal);
  Rng cluster_rng = run_rng.child(kTagCluster);

  RunResult result;
  auto pops = init_subpopulations(ctx, cfg, task_rngs);
  ctx.snapshot(result);

  const std::size_t elites = static_cast<std::size_t>(elite_count(cfg));
  // Worst-case per-generation cost per task: one DE generation plus up to N
  // incoming transfer evaluations.
  const long generation_cost = cfg.pop_size_per_task + cfg.n_assist;

  int generation = 0;
  while (true) {
    std::vector<char> active(static_cast<std::size_t>(n), 0);
    bool any_active = false;
    for (int t = 0; t < n; ++t) {
      active[static_cast<std::size_t>(t)] = ctx.can_afford(t, generation_cost) ? 1 : 0;
      any_active |= active[static_cast<std::size_t>(t)] != 0;
    }
    if (!any_active) break;

    if (generation % cfg.transfer_interval == 0) {
      // Task representation: mean genome of the top 20% of its members.
      std::vector<std::vector<double>> reps(static_cast<std::size_t>(n));
      for (int t = 0; t < n; ++t) {
        const auto& pop = pops[static_cast<std::size_t>(t)];
        const auto top = top_indices(pop, elites);
        std::vector<double> mean(pop.members[0].genome.size(), 0.0);
        for (std::size_t idx : top) {
          const auto& g = pop.members[idx].genome;
          for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += g[k];
        }
        for (auto& v : mean) v /= static_cast<double>(top.size());
        reps[static_cast<std::size_t>(t)] = std::move(mean);
      }
      const auto clustering = kmeans(reps, cfg.k_clusters, cluster_rng.next());
      const auto clusters = clustering.clusters(cfg.k_clusters);

      for (int t = 0; t < n; ++t) {
        if (!active[static_cast<std::size_t>(t)]) continue;
        const auto& cluster =
            clusters[static_cast<std::size_t>(clustering.assignment[static_cast<std::size_t>(t)])];
        std::vector<int> eligible;
        eligible.reserve(cluster.size());
        for (int other : cluster) {
          if (other != t) eligible.push_back(other);
        }
        const std::size_t assists =
            std::min<std::size_t>(static_cast<std::size_t>(cfg.n_assist), eligible.size());
        // Partial Fisher-Yates over the eligible pool.
        for (std::size_t pick = 0; pick < assists; ++pick) {
          const std::size_t j = pick + transfer_rng.index(eligible.size() - pick);
          std::swap(eligible[pick], eligible[j]);
        }
        auto& pop = pops[static_cast<std::size_t>(t)];
        for (std::size_t pick = 0; pick < assists; ++pick) {
          const int source = eligible[pick];
          recorder.record({generation, source, t, 1});
          const auto& source_pop = pops[static_cast<std::size_t>(source)];
          const auto top = top_indices(source_pop, elites);
          std::vector<const eacore::Genome*> elite_genomes;
          elite_genomes.reserve(top.size());
          for (std::size_t idx : top) elite_genomes.push_back(&source_pop.members[idx].genome);
          const GaussianSummary summary = fit_gaussian(elite_genomes);
          eacore::Genome candidate = sample_gaussian(summary, transfer_rng);
          const double fit = ctx.eval(t, candidate);
          const std::size_t worst = pop.worst_index();
          if (fit < pop.members[worst].fitness) {
            pop.members[worst].genome = std::move(candidate);
            pop.members[worst].fitness = fit;
          }
        }
      }
    }

    for (int t = 0; t < n; ++t) {
      if (!active[static_cast<std::size_t>(t)]) continue;
      de_generation(pops[static_cast<std::size_t>(t)], ctx, cfg,
                    task_rngs[static_cast<std::size_t>(t)]);
    }

    recorder.finalize(generation);
    ctx.snapshot(result);
    ++generation;
  }

  ctx.finish(result, generation);
  result.wall_clock_seconds = clock.seconds();
  return result;
}

}  // namespace emato::algos
