#include "emato/algos.hpp"
#include "algos_internal.hpp"

#include <algorithm>
#include <numeric>

namespace emato::algos {

namespace {

using eacore::kUnevaluated;
using eacore::MfIndividual;

// Ranks every pool member on every task (1 = best, ties to the lower pool
// index, unevaluated entries rank behind everyone), then derives scalar
// fitness and skill factor from the rank matrix.
void compute_ranks(std::vector<MfIndividual>& pool, int n_tasks) {
  const int unranked = static_cast<int>(pool.size()) + 1;
  for (auto& ind : pool) {
    ind.factorial_ranks.assign(static_cast<std::size_t>(n_tasks), unranked);
  }
  std::vector<std::size_t> order;
  for (int t = 0; t < n_tasks; ++t) {
    order.clear();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i].factorial_costs[static_cast<std::size_t>(t)] != kUnevaluated) {
        order.push_back(i);
      }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pool[a].factorial_costs[static_cast<std::size_t>(t)] <
             pool[b].factorial_costs[static_cast<std::size_t>(t)];
    });
    for (std::size_t r = 0; r < order.size(); ++r) {
      pool[order[r]].factorial_ranks[static_cast<std::size_t>(t)] =
          static_cast<int>(r) + 1;
    }
  }
  for (auto& ind : pool) {
    int best_rank = ind.factorial_ranks[0];
    int skill = 0;
    for (int t = 1; t < n_tasks; ++t) {
      if (ind.factorial_ranks[static_cast<std::size_t>(t)] < best_rank) {
        best_rank = ind.factorial_ranks[static_cast<std::size_t>(t)];
        skill = t;
      }
    }
    ind.skill_factor = skill;
    ind.scalar_fitness = 1.0 / static_cast<double>(best_rank);
  }
}

}  // namespace

// Multi-factorial evolution over one unified population. Cross-task matings
// gated by rmp are the only transfer channel: each such offspring counts as
// one transfer from the non-inherited parent's task to the inherited one.
RunResult run_mfea(const bench::ProblemSet& problem, const AlgoConfig& cfg,
                   ktrn::Recorder& recorder) {
  using namespace internal;
  const WallClock clock;
  const int n = problem.task_count();
  const int dim = problem.tasks[0].dim;
  EvalContext ctx(problem, cfg.max_evals_per_task);
  Rng run_rng(cfg.seed);
  Rng rng = run_rng.child(kTagGlobal);

  int pop_size = std::min(cfg.pop_size_per_task * n, cfg.mfea_population_cap);
  pop_size -= pop_size % 2;
  const double p_m = cfg.p_m > 0.0 ? cfg.p_m : 1.0 / static_cast<double>(dim);

  RunResult result;
  std::vector<MfIndividual> pool;
  pool.reserve(static_cast<std::size_t>(pop_size) * 2);
  {
    Rng init_rng = run_rng.child(kTagInit);
    for (int i = 0; i < pop_size; ++i) {
      MfIndividual ind;
      ind.genome = random_genome(dim, init_rng);
      ind.factorial_costs.assign(static_cast<std::size_t>(n), kUnevaluated);
      // Full initial evaluation: every individual on every task.
      for (int t = 0; t < n; ++t) {
        if (auto v = ctx.try_eval(t, ind.genome)) {
          ind.factorial_costs[static_cast<std::size_t>(t)] = *v;
        }
      }
      pool.push_back(std::move(ind));
    }
    compute_ranks(pool, n);
  }
  ctx.snapshot(result);

  const auto evaluate_on_skill = [&](MfIndividual& ind) {
    ind.factorial_costs.assign(static_cast<std::size_t>(n), kUnevaluated);
    if (auto v = ctx.try_eval(ind.skill_factor, ind.genome)) {
      ind.factorial_costs[static_cast<std::size_t>(ind.skill_factor)] = *v;
    }
  };

  // Generous stop guard for the budget-gated tail of a run.
  const long generation_cap =
      4 * (static_cast<long>(n) * cfg.max_evals_per_task) / pop_size + 100;

  int generation = 0;
  while (true) {
    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    const std::uint64_t evals_before = ctx.total_evals();
    std::vector<MfIndividual> offspring;
    offspring.reserve(static_cast<std::size_t>(pop_size));
    for (std::size_t p = 0; p + 1 < order.size(); p += 2) {
      const MfIndividual& pa = pool[order[p]];
      const MfIndividual& pb = pool[order[p + 1]];
      MfIndividual ca, cb;
      if (pa.skill_factor == pb.skill_factor) {
        auto [g1, g2] = eacore::sbx_crossover(pa.genome, pb.genome, cfg.eta_c, rng);
        ca.genome = eacore::polynomial_mutation(g1, cfg.eta_m, p_m, rng);
        cb.genome = eacore::polynomial_mutation(g2, cfg.eta_m, p_m, rng);
        ca.skill_factor = pa.skill_factor;
        cb.skill_factor = pa.skill_factor;
      } else if (rng.uniform01() < cfg.rmp) {
        auto [g1, g2] = eacore::sbx_crossover(pa.genome, pb.genome, cfg.eta_c, rng);
        ca.genome = std::move(g1);
        cb.genome = std::move(g2);
        for (MfIndividual* child : {&ca, &cb}) {
          const bool from_a = rng.uniform01() < 0.5;
          child->skill_factor = from_a ? pa.skill_factor : pb.skill_factor;
          const int source = from_a ? pb.skill_factor : pa.skill_factor;
          recorder.record({generation, source, child->skill_factor, 1});
        }
      } else {
        ca.genome = eacore::polynomial_mutation(pa.genome, cfg.eta_m, p_m, rng);
        cb.genome = eacore::polynomial_mutation(pb.genome, cfg.eta_m, p_m, rng);
        ca.skill_factor = pa.skill_factor;
        cb.skill_factor = pb.skill_factor;
      }
      evaluate_on_skill(ca);
      evaluate_on_skill(cb);
      offspring.push_back(std::move(ca));
      offspring.push_back(std::move(cb));
    }

    pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
                std::make_move_iterator(offspring.end()));
    compute_ranks(pool, n);

    std::vector<std::size_t> survivors(pool.size());
    std::iota(survivors.begin(), survivors.end(), 0);
    std::stable_sort(survivors.begin(), survivors.end(),
                     [&](std::size_t a, std::size_t b) {
                       return pool[a].scalar_fitness > pool[b].scalar_fitness;
                     });
    survivors.resize(static_cast<std::size_t>(pop_size));
    std::sort(survivors.begin(), survivors.end());
    std::vector<MfIndividual> next;
    next.reserve(static_cast<std::size_t>(pop_size));
    for (std::size_t idx : survivors) next.push_back(std::move(pool[idx]));
    pool = std::move(next);
    compute_ranks(pool, n);

    recorder.finalize(generation);
    ctx.snapshot(result);
    ++generation;

    bool exhausted = true;
    for (int t = 0; t < n; ++t) {
      if (ctx.count(t) < cfg.max_evals_per_task) {
        exhausted = false;
        break;
      }
    }
    const bool stalled = ctx.total_evals() == evals_before;
    if (exhausted || stalled || generation >= generation_cap) break;
  }

  ctx.finish(result, generation);
  result.wall_clock_seconds = clock.seconds();
  return result;
}

}  // namespace emato::algos
