#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace emato::bench {

enum class BaseFunction {
  Sphere,
  Ackley,
  Rosenbrock,
  Rastrigin,
  Griewank,
  Weierstrass,
  Schwefel,
};

inline constexpr int kBaseFunctionCount = 7;

// Per-function conventions, kept in one table so tests can reference them:
// the box is [-half_width, +half_width] in every dimension and the native
// optimum is (optimum_coord, ..., optimum_coord) with objective value 0.
struct BaseFunctionInfo {
  BaseFunction id;
  const char* name;
  double half_width;
  double optimum_coord;
};

const BaseFunctionInfo& info(BaseFunction f);
BaseFunction base_from_name(std::string_view name);

// Classic formulas: Sphere sum x^2; Ackley (a=20, b=0.2, c=2*pi);
// Rosenbrock sum 100(x_{i+1}-x_i^2)^2+(1-x_i)^2; Rastrigin 10D+sum(x^2-10cos);
// Griewank 1+sum x^2/4000 - prod cos(x_i/sqrt(i)); Weierstrass (a=0.5, b=3,
// k_max=20) normalized so f(0)=0; Schwefel 418.9828872724338*D - sum x sin(sqrt|x|).
// Throws std::invalid_argument on empty or non-finite input.
double evaluate_base(BaseFunction f, std::span<const double> x);

// One optimization task: a base function composed with a translation and a
// rotation. The composed objective is base(rotation * (x - shift) + o) where
// o is the base function's native optimum, so the task optimum sits exactly
// at `shift`, strictly inside the box.
struct TaskDef {
  int task_id = 0;
  BaseFunction base = BaseFunction::Sphere;
  int dim = 0;
  std::vector<double> shift;     // optimum location, native units
  std::vector<double> rotation;  // dim x dim, row-major, orthogonal
  double lower = 0.0;
  double upper = 0.0;

  // Throws std::invalid_argument on dimension mismatch or out-of-box input.
  double evaluate(std::span<const double> x) const;

  const std::vector<double>& optimum() const { return shift; }
  double rotation_at(int r, int c) const { return rotation[static_cast<std::size_t>(r) * dim + c]; }
};

// Largest |R*R^T - I| entry; generated tasks keep this below 1e-9.
double orthogonality_residual(const TaskDef& t);

enum class SetId { P1, P2, P3, P4, P5, P6, P7, P8, P9, P10 };

const char* set_name(SetId id);
SetId set_from_name(std::string_view name);

// Which base functions a set draws from.
std::span<const BaseFunction> composition(SetId id);

inline constexpr int kTasksPerSet = 50;

struct ProblemSet {
  SetId set_id = SetId::P1;
  int dim = 0;
  std::uint64_t seed = 0;
  std::vector<TaskDef> tasks;

  int task_count() const { return static_cast<int>(tasks.size()); }
};

// Builds a single task: shift uniform over the central 80% of the box,
// rotation from orthonormalizing a seeded standard-normal matrix.
TaskDef generate_task(BaseFunction base, int task_id, int dim, std::uint64_t seed);

// 50 tasks whose base functions round-robin over composition(set_id) and are
// then shuffled by the seed. Pure function of (set_id, dim, seed).
ProblemSet generate_problem_set(SetId set_id, int dim, std::uint64_t seed);

// JSON document {set_id, dim, seed, tasks:[...]}; lossless for doubles.
std::string to_json(const ProblemSet& ps);
ProblemSet problem_set_from_json(const std::string& text);
void save_problem_set(const ProblemSet& ps, const std::string& path);
ProblemSet load_problem_set(const std::string& path);

}  // namespace emato::bench
