#include "emato/algos.hpp"
#include "algos_internal.hpp"

namespace emato::algos {

// n independent DE runs under one generation clock; no knowledge transfer,
// so every finalized generation graph is empty.
RunResult run_st_de(const bench::ProblemSet& problem, const AlgoConfig& cfg,
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

  int generation = 0;
  while (true) {
    bool any_active = false;
    for (int t = 0; t < n; ++t) {
      if (!ctx.can_afford(t, cfg.pop_size_per_task)) continue;
      any_active = true;
      de_generation(pops[static_cast<std::size_t>(t)], ctx, cfg,
                    task_rngs[static_cast<std::size_t>(t)]);
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
