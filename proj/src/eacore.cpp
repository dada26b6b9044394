#include "emato/eacore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace emato::eacore {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void Subpopulation::push_archive(const Individual& ind) {
  elite_archive.push_back(ind);
  while (elite_archive.size() > archive_capacity) elite_archive.pop_front();
}

std::size_t Subpopulation::best_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (members[i].fitness < members[best].fitness) best = i;
  }
  return best;
}

std::size_t Subpopulation::worst_index() const {
  std::size_t worst = 0;
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (members[i].fitness > members[worst].fitness) worst = i;
  }
  return worst;
}

std::vector<double> decode(const Genome& g, const bench::TaskDef& t) {
  if (static_cast<int>(g.size()) < t.dim) {
    throw std::invalid_argument("decode: genome shorter than task dimension");
  }
  std::vector<double> x(t.dim);
  const double width = t.upper - t.lower;
  for (int k = 0; k < t.dim; ++k) {
    x[k] = std::clamp(t.lower + g[k] * width, t.lower, t.upper);
  }
  return x;
}

Genome encode(std::span<const double> native, const bench::TaskDef& t) {
  if (static_cast<int>(native.size()) != t.dim) {
    throw std::invalid_argument("encode: dimension mismatch");
  }
  Genome g(t.dim);
  const double width = t.upper - t.lower;
  for (int k = 0; k < t.dim; ++k) g[k] = (native[k] - t.lower) / width;
  return g;
}

Genome binomial_crossover(const Genome& target, const Genome& donor, double cr,
                          Rng& rng) {
  if (target.size() != donor.size()) {
    throw std::invalid_argument("binomial_crossover: length mismatch");
  }
  const std::size_t d = target.size();
  const std::size_t forced = rng.index(d);
  Genome trial(d);
  for (std::size_t k = 0; k < d; ++k) {
    const bool from_donor = rng.uniform01() < cr || k == forced;
    trial[k] = from_donor ? donor[k] : target[k];
  }
  return trial;
}

Genome de_rand_1_bin(const std::vector<Individual>& pop, std::size_t target_index,
                     double f, double cr, Rng& rng) {
  if (pop.size() < 4) {
    throw std::invalid_argument("de_rand_1_bin: population must hold >= 4 members");
  }
  std::size_t r1, r2, r3;
  do {
    r1 = rng.index(pop.size());
  } while (r1 == target_index);
  do {
    r2 = rng.index(pop.size());
  } while (r2 == target_index || r2 == r1);
  do {
    r3 = rng.index(pop.size());
  } while (r3 == target_index || r3 == r1 || r3 == r2);

  const Genome& a = pop[r1].genome;
  const Genome& b = pop[r2].genome;
  const Genome& c = pop[r3].genome;
  Genome mutant(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    mutant[k] = a[k] + f * (b[k] - c[k]);
  }
  Genome trial = binomial_crossover(pop[target_index].genome, mutant, cr, rng);
  for (auto& v : trial) v = clamp01(v);
  return trial;
}

namespace detail {

std::pair<Genome, Genome> sbx_unclamped(const Genome& p1, const Genome& p2,
                                        double eta_c, Rng& rng) {
  if (p1.size() != p2.size()) {
    throw std::invalid_argument("sbx_crossover: parent length mismatch");
  }
  Genome c1(p1.size());
  Genome c2(p1.size());
  for (std::size_t k = 0; k < p1.size(); ++k) {
    const double u = rng.uniform01();
    const double beta =
        (u <= 0.5) ? std::pow(2.0 * u, 1.0 / (eta_c + 1.0))
                   : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta_c + 1.0));
    // Midpoint +/- spread form: identical parents reproduce exactly.
    const double mid = 0.5 * (p1[k] + p2[k]);
    const double spread = 0.5 * beta * (p1[k] - p2[k]);
    c1[k] = mid + spread;
    c2[k] = mid - spread;
    if (rng.uniform01() < 0.5) std::swap(c1[k], c2[k]);
  }
  return {std::move(c1), std::move(c2)};
}

}  // namespace detail

std::pair<Genome, Genome> sbx_crossover(const Genome& p1, const Genome& p2,
                                        double eta_c, Rng& rng) {
  auto [c1, c2] = detail::sbx_unclamped(p1, p2, eta_c, rng);
  for (auto& v : c1) v = clamp01(v);
  for (auto& v : c2) v = clamp01(v);
  return {std::move(c1), std::move(c2)};
}

Genome polynomial_mutation(const Genome& g, double eta_m, double p_m, Rng& rng) {
  Genome out = g;
  const double mut_pow = 1.0 / (eta_m + 1.0);
  for (auto& y : out) {
    if (rng.uniform01() > p_m) continue;
    const double u = rng.uniform01();
    double delta;
    if (u <= 0.5) {
      const double val =
          2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - y, eta_m + 1.0);
      delta = std::pow(val, mut_pow) - 1.0;
    } else {
      const double val =
          2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(y, eta_m + 1.0);
      delta = 1.0 - std::pow(val, mut_pow);
    }
    y = clamp01(y + delta);
  }
  return out;
}

}  // namespace emato::eacore
