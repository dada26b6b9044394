#include "emato/algos.hpp"
#include "algos_internal.hpp"

#include <cmath>

namespace emato::algos {

namespace {

// Divergence stand-in while an archive is too small to summarize.
constexpr double kColdDivergence = 1e12;

}  // namespace

// Archive-based many-task DE: each task keeps a FIFO archive of generation
// bests and a transfer probability tp. A transfer picks the source by a
// softmax over reward/(1+divergence), crosses one archive individual into a
// random member, and is rewarded or punished by whether it improved the
// task's best so far. Non-transfer generations run plain DE.
RunResult run_matde(const bench::ProblemSet& problem, const AlgoConfig& cfg,
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

  RunResult result;
  auto pops = init_subpopulations(ctx, cfg, task_rngs);
  ctx.snapshot(result);
  // Seed the archives so transfers at generation 0 have material.
  for (auto& pop : pops) pop.push_archive(pop.members[pop.best_index()]);

  std::vector<double> tp(static_cast<std::size_t>(n),
                         std::clamp(cfg.tp0, cfg.tp_min, cfg.tp_max));
  std::vector<std::vector<double>> reward(
      static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 1.0));

  std::vector<std::optional<GaussianSummary>> summary_cache(static_cast<std::size_t>(n));
  const auto archive_summary = [&](int t) -> const std::optional<GaussianSummary>& {
    auto& slot = summary_cache[static_cast<std::size_t>(t)];
    if (!slot) {
      const auto& archive = pops[static_cast<std::size_t>(t)].elite_archive;
      if (archive.size() >= 2) {
        std::vector<const eacore::Genome*> genomes;
        genomes.reserve(archive.size());
        for (const auto& ind : archive) genomes.push_back(&ind.genome);
        slot = fit_gaussian(genomes);
      }
    }
    return slot;
  };

  int generation = 0;
  while (true) {
    bool any_active = false;
    std::fill(summary_cache.begin(), summary_cache.end(), std::nullopt);
    for (int t = 0; t < n; ++t) {
      if (!ctx.can_afford(t, cfg.pop_size_per_task)) continue;
      any_active = true;
      auto& rng = task_rngs[static_cast<std::size_t>(t)];
      auto& pop = pops[static_cast<std::size_t>(t)];

      const bool transfer_round = generation % cfg.transfer_interval == 0;
      if (transfer_round && rng.uniform01() < tp[static_cast<std::size_t>(t)]) {
        // Source choice: softmax over reward scaled by archive similarity.
        std::vector<double> score(static_cast<std::size_t>(n), 0.0);
        double max_score = -1.0;
        for (int j = 0; j < n; ++j) {
          if (j == t) continue;
          double divergence = kColdDivergence;
          const auto& si = archive_summary(t);
          const auto& sj = archive_summary(j);
          if (si && sj) divergence = symmetrized_kld(*si, *sj);
          score[static_cast<std::size_t>(j)] =
              reward[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] /
              (1.0 + divergence);
          max_score = std::max(max_score, score[static_cast<std::size_t>(j)]);
        }
        double total = 0.0;
        std::vector<double> weight(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < n; ++j) {
          if (j == t) continue;
          weight[static_cast<std::size_t>(j)] =
              std::exp(score[static_cast<std::size_t>(j)] - max_score);
          total += weight[static_cast<std::size_t>(j)];
        }
        const double u = rng.uniform01() * total;
        int source = -1;
        double cum = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j == t) continue;
          cum += weight[static_cast<std::size_t>(j)];
          if (cum >= u) {
            source = j;
            break;
          }
        }
        if (source < 0) source = (t == n - 1) ? n - 2 : n - 1;

        recorder.record({generation, source, t, 1});
        const auto& donor_archive = pops[static_cast<std::size_t>(source)].elite_archive;
        const auto& donor = donor_archive[rng.index(donor_archive.size())];
        const auto& target = pop.members[rng.index(pop.members.size())];
        eacore::Genome trial =
            eacore::binomial_crossover(target.genome, donor.genome, cfg.cr, rng);
        const double previous_best = ctx.best(t);
        const double fit = ctx.eval(t, trial);
        const bool success = fit < previous_best;
        auto& r = reward[static_cast<std::size_t>(t)][static_cast<std::size_t>(source)];
        r *= success ? cfg.expand : cfg.shrink;
        tp[static_cast<std::size_t>(t)] =
            tp_update(tp[static_cast<std::size_t>(t)], success, cfg);
        const std::size_t worst = pop.worst_index();
        if (fit < pop.members[worst].fitness) {
          pop.members[worst].genome = std::move(trial);
          pop.members[worst].fitness = fit;
        }
      } else {
        de_generation(pop, ctx, cfg, rng);
      }
      pop.push_archive(pop.members[pop.best_index()]);
    }
    if (!any_active) break;
    recorder.finalize(generation);
    ctx.snapshot(result);
    ++generation;
  }

  ctx.finish(result, generation);
  result.wall_clock_seconds = clock.seconds();
  return result;
}

}  // namespace emato::algos
