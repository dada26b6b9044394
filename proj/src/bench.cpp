#include "emato/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "emato/errors.hpp"
#include "emato/rng.hpp"
#include "json.hpp"

namespace emato::bench {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Schwefel constants at full double precision; the usual 4-decimal textbook
// roundings leave a residual above the 1e-4 optimum tolerance at dim 20.
constexpr double kSchwefelOffset = 418.9828872724338;
constexpr double kSchwefelOptimum = 420.9687462275036;

constexpr BaseFunctionInfo kInfo[kBaseFunctionCount] = {
    {BaseFunction::Sphere, "sphere", 5.12, 0.0},
    {BaseFunction::Ackley, "ackley", 32.0, 0.0},
    {BaseFunction::Rosenbrock, "rosenbrock", 2.048, 1.0},
    {BaseFunction::Rastrigin, "rastrigin", 5.12, 0.0},
    {BaseFunction::Griewank, "griewank", 600.0, 0.0},
    {BaseFunction::Weierstrass, "weierstrass", 0.5, 0.0},
    {BaseFunction::Schwefel, "schwefel", 500.0, kSchwefelOptimum},
};

constexpr int kWeierstrassKMax = 20;

double weierstrass(std::span<const double> x) {
  const double a = 0.5;
  const double b = 3.0;
  double sum = 0.0;
  for (double xi : x) {
    double ak = 1.0;
    double bk = 1.0;
    for (int k = 0; k <= kWeierstrassKMax; ++k) {
      sum += ak * std::cos(kTwoPi * bk * (xi + 0.5));
      ak *= a;
      bk *= b;
    }
  }
  // Same loop shape at x=0 so the subtraction cancels exactly there.
  double offset = 0.0;
  {
    double ak = 1.0;
    double bk = 1.0;
    for (int k = 0; k <= kWeierstrassKMax; ++k) {
      offset += ak * std::cos(kTwoPi * bk * 0.5);
      ak *= a;
      bk *= b;
    }
  }
  return sum - static_cast<double>(x.size()) * offset;
}

}  // namespace

const BaseFunctionInfo& info(BaseFunction f) {
  return kInfo[static_cast<int>(f)];
}

BaseFunction base_from_name(std::string_view name) {
  for (const auto& entry : kInfo) {
    if (name == entry.name) return entry.id;
  }
  throw ConfigError("unknown base function: " + std::string(name));
}

double evaluate_base(BaseFunction f, std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("evaluate_base: empty input");
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("evaluate_base: non-finite input");
    }
  }
  const auto d = static_cast<double>(x.size());
  switch (f) {
    case BaseFunction::Sphere: {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s;
    }
    case BaseFunction::Ackley: {
      double sq = 0.0;
      double cs = 0.0;
      for (double v : x) {
        sq += v * v;
        cs += std::cos(kTwoPi * v);
      }
      return 20.0 + std::numbers::e - 20.0 * std::exp(-0.2 * std::sqrt(sq / d)) -
             std::exp(cs / d);
    }
    case BaseFunction::Rosenbrock: {
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
      }
      return s;
    }
    case BaseFunction::Rastrigin: {
      double s = 10.0 * d;
      for (double v : x) s += v * v - 10.0 * std::cos(kTwoPi * v);
      return s;
    }
    case BaseFunction::Griewank: {
      double s = 0.0;
      double p = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * x[i];
        p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
      }
      return 1.0 + s / 4000.0 - p;
    }
    case BaseFunction::Weierstrass:
      return weierstrass(x);
    case BaseFunction::Schwefel: {
      double s = 0.0;
      for (double v : x) s += v * std::sin(std::sqrt(std::abs(v)));
      return kSchwefelOffset * d - s;
    }
  }
  throw std::invalid_argument("evaluate_base: unknown function");
}

double TaskDef::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) {
    throw std::invalid_argument("evaluate_task: dimension mismatch");
  }
  for (double v : x) {
    if (!(v >= lower && v <= upper)) {
      throw std::invalid_argument("evaluate_task: point outside box bounds");
    }
  }
  const double opt = info(base).optimum_coord;
  std::vector<double> z(dim);
  for (int r = 0; r < dim; ++r) {
    double acc = 0.0;
    const double* row = rotation.data() + static_cast<std::size_t>(r) * dim;
    for (int c = 0; c < dim; ++c) acc += row[c] * (x[c] - shift[c]);
    z[r] = acc + opt;
  }
  return evaluate_base(base, z);
}

double orthogonality_residual(const TaskDef& t) {
  double worst = 0.0;
  for (int i = 0; i < t.dim; ++i) {
    for (int j = 0; j < t.dim; ++j) {
      double dot = 0.0;
      for (int k = 0; k < t.dim; ++k) {
        dot += t.rotation_at(i, k) * t.rotation_at(j, k);
      }
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(dot - target));
    }
  }
  return worst;
}

namespace {

// Modified Gram-Schmidt with one re-orthogonalization pass over rows of a
// standard-normal matrix. Returns false when a pivot degenerates (resample).
bool random_orthogonal(int dim, Rng& rng, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  for (auto& v : out) v = rng.normal();
  for (int i = 0; i < dim; ++i) {
    double* row = out.data() + static_cast<std::size_t>(i) * dim;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < i; ++j) {
        const double* prev = out.data() + static_cast<std::size_t>(j) * dim;
        double dot = 0.0;
        for (int k = 0; k < dim; ++k) dot += row[k] * prev[k];
        for (int k = 0; k < dim; ++k) row[k] -= dot * prev[k];
      }
    }
    double norm = 0.0;
    for (int k = 0; k < dim; ++k) norm += row[k] * row[k];
    norm = std::sqrt(norm);
    if (norm < 1e-10) return false;
    for (int k = 0; k < dim; ++k) row[k] /= norm;
  }
  return true;
}

constexpr BaseFunction kP1[] = {BaseFunction::Sphere};
constexpr BaseFunction kP2[] = {BaseFunction::Rosenbrock};
constexpr BaseFunction kP3[] = {BaseFunction::Ackley};
constexpr BaseFunction kP4[] = {BaseFunction::Sphere, BaseFunction::Rosenbrock,
                                BaseFunction::Rastrigin};
constexpr BaseFunction kP5[] = {BaseFunction::Rastrigin, BaseFunction::Griewank};
constexpr BaseFunction kP6[] = {BaseFunction::Ackley, BaseFunction::Weierstrass,
                                BaseFunction::Schwefel};
constexpr BaseFunction kP7[] = {BaseFunction::Ackley, BaseFunction::Rosenbrock,
                                BaseFunction::Rastrigin, BaseFunction::Griewank};
constexpr BaseFunction kP8[] = {BaseFunction::Rosenbrock, BaseFunction::Rastrigin,
                                BaseFunction::Griewank, BaseFunction::Weierstrass};
constexpr BaseFunction kP9[] = {BaseFunction::Ackley, BaseFunction::Rastrigin,
                                BaseFunction::Griewank, BaseFunction::Weierstrass,
                                BaseFunction::Schwefel};
constexpr BaseFunction kP10[] = {BaseFunction::Sphere, BaseFunction::Rastrigin,
                                 BaseFunction::Weierstrass, BaseFunction::Schwefel};

constexpr const char* kSetNames[] = {"P1", "P2", "P3", "P4", "P5",
                                     "P6", "P7", "P8", "P9", "P10"};

}  // namespace

const char* set_name(SetId id) { return kSetNames[static_cast<int>(id)]; }

SetId set_from_name(std::string_view name) {
  for (int i = 0; i < 10; ++i) {
    if (name == kSetNames[i]) return static_cast<SetId>(i);
  }
  throw ConfigError("unknown problem set: " + std::string(name));
}

std::span<const BaseFunction> composition(SetId id) {
  switch (id) {
    case SetId::P1: return kP1;
    case SetId::P2: return kP2;
    case SetId::P3: return kP3;
    case SetId::P4: return kP4;
    case SetId::P5: return kP5;
    case SetId::P6: return kP6;
    case SetId::P7: return kP7;
    case SetId::P8: return kP8;
    case SetId::P9: return kP9;
    case SetId::P10: return kP10;
  }
  throw std::invalid_argument("composition: bad set id");
}

TaskDef generate_task(BaseFunction base, int task_id, int dim, std::uint64_t seed) {
  if (dim < 2) throw ConfigError("generate_task: dim must be >= 2");
  const auto& fn = info(base);
  TaskDef t;
  t.task_id = task_id;
  t.base = base;
  t.dim = dim;
  t.lower = -fn.half_width;
  t.upper = fn.half_width;
  Rng rng(seed);
  t.shift.resize(dim);
  for (auto& s : t.shift) s = rng.uniform(-0.8 * fn.half_width, 0.8 * fn.half_width);
  while (!random_orthogonal(dim, rng, t.rotation)) {
  }
  return t;
}

ProblemSet generate_problem_set(SetId set_id, int dim, std::uint64_t seed) {
  if (dim < 2) throw ConfigError("generate_problem_set: dim must be >= 2");
  ProblemSet ps;
  ps.set_id = set_id;
  ps.dim = dim;
  ps.seed = seed;
  const std::uint64_t root =
      mix64(seed, mix64(static_cast<std::uint64_t>(set_id) + 1,
                        static_cast<std::uint64_t>(dim)));
  const auto row = composition(set_id);
  std::vector<BaseFunction> bases(kTasksPerSet);
  for (int i = 0; i < kTasksPerSet; ++i) bases[i] = row[i % row.size()];
  Rng shuffle_rng(mix64(root, 0xb5a5u));
  shuffle_rng.shuffle(bases);
  ps.tasks.reserve(kTasksPerSet);
  for (int i = 0; i < kTasksPerSet; ++i) {
    ps.tasks.push_back(
        generate_task(bases[i], i, dim, mix64(root, 1000 + static_cast<std::uint64_t>(i))));
  }
  return ps;
}

std::string to_json(const ProblemSet& ps) {
  nlohmann::json doc;
  doc["set_id"] = set_name(ps.set_id);
  doc["dim"] = ps.dim;
  doc["seed"] = ps.seed;
  auto& tasks = doc["tasks"] = nlohmann::json::array();
  for (const auto& t : ps.tasks) {
    nlohmann::json jt;
    jt["task_id"] = t.task_id;
    jt["base"] = info(t.base).name;
    jt["shift"] = t.shift;
    auto& rot = jt["rotation"] = nlohmann::json::array();
    for (int r = 0; r < t.dim; ++r) {
      rot.push_back(std::vector<double>(
          t.rotation.begin() + static_cast<std::size_t>(r) * t.dim,
          t.rotation.begin() + static_cast<std::size_t>(r + 1) * t.dim));
    }
    jt["lower"] = t.lower;
    jt["upper"] = t.upper;
    tasks.push_back(std::move(jt));
  }
  return doc.dump(2) + "\n";
}

ProblemSet problem_set_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("problem set JSON parse error: ") + e.what());
  }
  try {
    ProblemSet ps;
    ps.set_id = set_from_name(doc.at("set_id").get<std::string>());
    ps.dim = doc.at("dim").get<int>();
    ps.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& jt : doc.at("tasks")) {
      TaskDef t;
      t.task_id = jt.at("task_id").get<int>();
      t.base = base_from_name(jt.at("base").get<std::string>());
      t.shift = jt.at("shift").get<std::vector<double>>();
      t.dim = static_cast<int>(t.shift.size());
      t.lower = jt.at("lower").get<double>();
      t.upper = jt.at("upper").get<double>();
      const auto& rot = jt.at("rotation");
      if (static_cast<int>(rot.size()) != t.dim) {
        throw ConfigError("problem set JSON: rotation row count != dim");
      }
      t.rotation.reserve(static_cast<std::size_t>(t.dim) * t.dim);
      for (const auto& jrow : rot) {
        const auto row = jrow.get<std::vector<double>>();
        if (static_cast<int>(row.size()) != t.dim) {
          throw ConfigError("problem set JSON: rotation is not square");
        }
        t.rotation.insert(t.rotation.end(), row.begin(), row.end());
      }
      ps.tasks.push_back(std::move(t));
    }
    return ps;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("problem set JSON schema error: ") + e.what());
  }
}

void save_problem_set(const ProblemSet& ps, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << to_json(ps);
}

ProblemSet load_problem_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open problem set file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return problem_set_from_json(buf.str());
}

}  // namespace emato::bench
