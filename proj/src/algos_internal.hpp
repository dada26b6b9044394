#pragma once

// Shared plumbing for the algorithm runners: per-task evaluation accounting,
// trace snapshots, population init, and one synchronous DE generation.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <stdexcept>
#include <vector>

#include "emato/algos.hpp"
#include "emato/bench.hpp"
#include "emato/eacore.hpp"
#include "emato/rng.hpp"

namespace emato::algos::internal {

// Stream tags for deriving per-purpose child generators from the run seed.
inline constexpr std::uint64_t kTagTask = 0x100000;
inline constexpr std::uint64_t kTagGlobal = 0x200001;
inline constexpr std::uint64_t kTagInit = 0x200002;
inline constexpr std::uint64_t kTagCluster = 0x200003;

class EvalContext {
 public:
  EvalContext(const bench::ProblemSet& problem, long budget_per_task)
      : problem_(&problem),
        budget_(budget_per_task),
        counts_(problem.tasks.size(), 0),
        best_(problem.tasks.size(), eacore::kUnevaluated) {}

  int task_count() const { return problem_->task_count(); }
  const bench::TaskDef& task(int t) const { return problem_->tasks[static_cast<std::size_t>(t)]; }
  long budget() const { return budget_; }
  long count(int t) const { return counts_[static_cast<std::size_t>(t)]; }
  bool can_afford(int t, long evals) const { return count(t) + evals <= budget_; }
  double best(int t) const { return best_[static_cast<std::size_t>(t)]; }

  // Counted objective call; returns nothing once the task budget is spent.
  std::optional<double> try_eval(int t, const eacore::Genome& g) {
    if (counts_[static_cast<std::size_t>(t)] >= budget_) return std::nullopt;
    ++counts_[static_cast<std::size_t>(t)];
    const double value = task(t).evaluate(eacore::decode(g, task(t)));
    best_[static_cast<std::size_t>(t)] = std::min(best_[static_cast<std::size_t>(t)], value);
    return value;
  }

  double eval(int t, const eacore::Genome& g) {
    auto v = try_eval(t, g);
    if (!v) throw std::logic_error("evaluation budget overrun");
    return *v;
  }

  std::uint64_t total_evals() const {
    std::uint64_t total = 0;
    for (long c : counts_) total += static_cast<std::uint64_t>(c);
    return total;
  }

  void snapshot(RunResult& result) const {
    result.best_by_generation.push_back(best_);
    result.evals_by_generation.push_back(total_evals());
  }

  void finish(RunResult& result, int generations) const {
    result.final_best = best_;
    result.eval_counts = counts_;
    result.generations = generations;
  }

 private:
  const bench::ProblemSet* problem_;
  long budget_;
  std::vector<long> counts_;
  std::vector<double> best_;
};

inline eacore::Genome random_genome(int dim, Rng& rng) {
  eacore::Genome g(static_cast<std::size_t>(dim));
  for (auto& v : g) v = rng.uniform01();
  return g;
}

// One subpopulation per task, uniform genomes, all members evaluated.
inline std::vector<eacore::Subpopulation> init_subpopulations(
    EvalContext& ctx, const AlgoConfig& cfg, std::vector<Rng>& task_rngs) {
  const int n = ctx.task_count();
  const int dim = ctx.task(0).dim;
  std::vector<eacore::Subpopulation> pops(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    auto& pop = pops[static_cast<std::size_t>(t)];
    pop.task_id = t;
    pop.archive_capacity = static_cast<std::size_t>(cfg.archive_capacity);
    pop.members.reserve(static_cast<std::size_t>(cfg.pop_size_per_task));
    for (int i = 0; i < cfg.pop_size_per_task; ++i) {
      eacore::Individual ind;
      ind.task_id = t;
      ind.genome = random_genome(dim, task_rngs[static_cast<std::size_t>(t)]);
      ind.fitness = ctx.eval(t, ind.genome);
      pop.members.push_back(std::move(ind));
    }
  }
  return pops;
}

// Synchronous DE/rand/1/bin generation with greedy one-to-one selection.
inline void de_generation(eacore::Subpopulation& pop, EvalContext& ctx,
                          const AlgoConfig& cfg, Rng& rng) {
  const int t = pop.task_id;
  std::vector<eacore::Individual> next = pop.members;
  for (std::size_t i = 0; i < pop.members.size(); ++i) {
    eacore::Genome trial = eacore::de_rand_1_bin(pop.members, i, cfg.f, cfg.cr, rng);
    const double fit = ctx.eval(t, trial);
    if (fit <= pop.members[i].fitness) {
      next[i].genome = std::move(trial);
      next[i].fitness = fit;
    }
  }
  pop.members = std::move(next);
}

// Indices of the `count` best members, ties to the lower index.
inline std::vector<std::size_t> top_indices(const eacore::Subpopulation& pop,
                                            std::size_t count) {
  std::vector<std::size_t> order(pop.members.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pop.members[a].fitness < pop.members[b].fitness;
  });
  order.resize(std::min(count, order.size()));
  return order;
}

inline int elite_count(const AlgoConfig& cfg) {
  return std::max(1, static_cast<int>(cfg.pop_size_per_task * cfg.elite_fraction));
}

class WallClock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace emato::algos::internal
