#pragma once

#include <deque>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "emato/bench.hpp"
#include "emato/rng.hpp"

namespace emato::eacore {

// Candidate solution in the unified normalized search space [0,1]^D.
using Genome = std::vector<double>;

inline constexpr double kUnevaluated = std::numeric_limits<double>::infinity();

struct Individual {
  Genome genome;
  double fitness = kUnevaluated;
  int task_id = -1;
};

// Multi-factorial bookkeeping: factorial_costs[t] is the objective on task t
// (kUnevaluated when the individual was never evaluated there), ranks are
// 1-based positions per task, scalar_fitness = 1/min rank and skill_factor
// the argmin task (ties to the lowest index).
struct MfIndividual {
  Genome genome;
  std::vector<double> factorial_costs;
  std::vector<int> factorial_ranks;
  double scalar_fitness = 0.0;
  int skill_factor = 0;
};

struct Subpopulation {
  int task_id = -1;
  std::vector<Individual> members;
  std::deque<Individual> elite_archive;
  std::size_t archive_capacity = 300;

  // FIFO: oldest entry is dropped once the capacity is reached.
  void push_archive(const Individual& ind);
  std::size_t best_index() const;   // lowest fitness, ties to lowest index
  std::size_t worst_index() const;  // highest fitness, ties to lowest index
};

// Linear map of the first t.dim genes onto the task box.
std::vector<double> decode(const Genome& g, const bench::TaskDef& t);

// Inverse of decode on the first t.dim components (test and tooling helper).
Genome encode(std::span<const double> native, const bench::TaskDef& t);

// DE/rand/1/bin: trial = x_r1 + F*(x_r2 - x_r3), binomial crossover against
// the target with one forced gene, clamped to [0,1]. r1, r2, r3 are distinct
// and differ from the target; requires a population of at least 4.
Genome de_rand_1_bin(const std::vector<Individual>& pop, std::size_t target_index,
                     double f, double cr, Rng& rng);

// Binomial crossover with one forced donor gene (used by DE and by the
// archive-based transfer crossover).
Genome binomial_crossover(const Genome& target, const Genome& donor, double cr,
                          Rng& rng);

// Simulated binary crossover; every gene goes through the beta transform and
// children swap genes with probability 0.5, then both are clamped to [0,1].
std::pair<Genome, Genome> sbx_crossover(const Genome& p1, const Genome& p2,
                                        double eta_c, Rng& rng);

Genome polynomial_mutation(const Genome& g, double eta_m, double p_m, Rng& rng);

namespace detail {
// Unclamped SBX pair; preserves the per-component parent midpoint exactly.
std::pair<Genome, Genome> sbx_unclamped(const Genome& p1, const Genome& p2,
                                        double eta_c, Rng& rng);
}  // namespace detail

}  // namespace emato::eacore
