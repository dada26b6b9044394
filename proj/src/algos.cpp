#include "emato/algos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "emato/errors.hpp"

namespace emato::algos {

namespace {

constexpr const char* kNames[] = {"MFEA", "EMATO_MKT", "MATDE", "ST_DE"};

constexpr double kVarianceFloor = 1e-12;

}  // namespace

const char* algorithm_name(Algorithm a) { return kNames[static_cast<int>(a)]; }

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (name == kNames[i]) return static_cast<Algorithm>(i);
  }
  // CLI-friendly aliases.
  if (name == "mfea") return Algorithm::MFEA;
  if (name == "mkt" || name == "emato-mkt" || name == "emato_mkt") return Algorithm::EMATO_MKT;
  if (name == "matde") return Algorithm::MATDE;
  if (name == "stde" || name == "st-de" || name == "st_de" || name == "de") return Algorithm::ST_DE;
  return std::nullopt;
}

void AlgoConfig::validate(int n_tasks) const {
  const auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  if (n_tasks < 2) fail("need at least two tasks");
  if (pop_size_per_task < 4) fail("pop_size_per_task must be >= 4");
  if (max_evals_per_task < pop_size_per_task) {
    fail("max_evals_per_task must cover at least one full population");
  }
  if (!(f > 0.0)) fail("F must be positive");
  if (!(cr > 0.0 && cr <= 1.0)) fail("CR must be in (0, 1]");
  if (!(eta_c > 0.0) || !(eta_m > 0.0)) fail("distribution indices must be positive");
  if (p_m > 1.0) fail("mutation probability must be <= 1");
  switch (algorithm) {
    case Algorithm::MFEA:
      if (!(rmp >= 0.0 && rmp <= 1.0)) fail("rmp must be in [0, 1]");
      if (mfea_population_cap < 4) fail("population cap must be >= 4");
      break;
    case Algorithm::EMATO_MKT:
      if (k_clusters < 1 || k_clusters > n_tasks) fail("K must be in [1, n]");
      if (n_assist < 1 || n_assist > n_tasks - 1) fail("N must be in [1, n-1]");
      if (transfer_interval < 1) fail("transfer_interval must be >= 1");
      if (!(elite_fraction > 0.0 && elite_fraction <= 1.0)) {
        fail("elite_fraction must be in (0, 1]");
      }
      break;
    case Algorithm::MATDE:
      if (!(tp0 >= 0.0 && tp0 <= 1.0)) fail("tp0 must be in [0, 1]");
      if (!(tp_min >= 0.0 && tp_max <= 1.0 && tp_min <= tp_max)) {
        fail("tp bounds must satisfy 0 <= min <= max <= 1");
      }
      if (!(shrink > 0.0 && shrink < 1.0)) fail("shrink must be in (0, 1)");
      if (!(expand > 1.0)) fail("expand must be > 1");
      if (archive_capacity < 1) fail("archive_capacity must be >= 1");
      if (transfer_interval < 1) fail("transfer_interval must be >= 1");
      break;
    case Algorithm::ST_DE:
      break;
  }
}

GaussianSummary fit_gaussian(const std::vector<const eacore::Genome*>& genomes) {
  if (genomes.empty()) throw std::invalid_argument("fit_gaussian: no genomes");
  const std::size_t dim = genomes[0]->size();
  GaussianSummary s;
  s.mean.assign(dim, 0.0);
  s.variance.assign(dim, 0.0);
  for (const auto* g : genomes) {
    for (std::size_t k = 0; k < dim; ++k) s.mean[k] += (*g)[k];
  }
  for (auto& m : s.mean) m /= static_cast<double>(genomes.size());
  for (const auto* g : genomes) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = (*g)[k] - s.mean[k];
      s.variance[k] += d * d;
    }
  }
  for (auto& v : s.variance) {
    v = std::max(v / static_cast<double>(genomes.size()), kVarianceFloor);
  }
  return s;
}

eacore::Genome sample_gaussian(const GaussianSummary& s, Rng& rng) {
  eacore::Genome g(s.mean.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    g[k] = std::clamp(rng.normal(s.mean[k], std::sqrt(s.variance[k])), 0.0, 1.0);
  }
  return g;
}

double symmetrized_kld(const GaussianSummary& a, const GaussianSummary& b) {
  if (a.mean.size() != b.mean.size()) {
    throw std::invalid_argument("symmetrized_kld: dimension mismatch");
  }
  const auto one_way = [](const GaussianSummary& p, const GaussianSummary& q) {
    double sum = 0.0;
    for (std::size_t k = 0; k < p.mean.size(); ++k) {
      const double dm = q.mean[k] - p.mean[k];
      sum += p.variance[k] / q.variance[k] + dm * dm / q.variance[k] - 1.0 +
             std::log(q.variance[k] / p.variance[k]);
    }
    return 0.5 * sum;
  };
  return one_way(a, b) + one_way(b, a);
}

double tp_update(double tp, bool success, const AlgoConfig& cfg) {
  return success ? std::min(cfg.tp_max, tp * cfg.expand)
                 : std::max(cfg.tp_min, tp * cfg.shrink);
}

RunResult run_algorithm(const bench::ProblemSet& problem, const AlgoConfig& cfg,
                        ktrn::Recorder& recorder) {
  cfg.validate(problem.task_count());
  switch (cfg.algorithm) {
    case Algorithm::MFEA: return run_mfea(problem, cfg, recorder);
    case Algorithm::EMATO_MKT: return run_emato_mkt(problem, cfg, recorder);
    case Algorithm::MATDE: return run_matde(problem, cfg, recorder);
    case Algorithm::ST_DE: return run_st_de(problem, cfg, recorder);
  }
  throw ConfigError("config: unknown algorithm");
}

}  // namespace emato::algos
