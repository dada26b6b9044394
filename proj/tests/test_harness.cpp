#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "emato/harness.hpp"
#include "emato/netmetrics.hpp"

using namespace emato;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      out[fs::relative(entry.path(), root).string()] = slurp(entry.path());
    }
  }
  return out;
}

harness::RunConfig tiny_config(const std::string& out_dir) {
  harness::RunConfig cfg;
  cfg.problem.set_id = bench::SetId::P5;
  cfg.problem.dim = 4;
  cfg.problem.seed = 3;
  cfg.algo.algorithm = algos::Algorithm::EMATO_MKT;
  cfg.algo.pop_size_per_task = 8;
  cfg.algo.max_evals_per_task = 200;
  cfg.algo.k_clusters = 5;
  cfg.algo.n_assist = 2;
  cfg.algo.seed = 77;
  cfg.repeats = 2;
  cfg.output_dir = out_dir;
  return cfg;
}

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(path);
  REQUIRE(in);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) row.push_back(field);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("run_experiment output trees are byte-identical across reruns") {
  const auto dir_a = temp_dir("emato_h_det_a");
  const auto dir_b = temp_dir("emato_h_det_b");
  auto cfg = tiny_config(dir_a.string());
  harness::run_experiment(cfg);
  cfg.output_dir = dir_b.string();
  harness::run_experiment(cfg);
  const auto a = tree_contents(dir_a);
  const auto b = tree_contents(dir_b);
  REQUIRE(!a.empty());
  CHECK(a == b);
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("summary mean equals the mean of the per-task finals") {
  const auto dir = temp_dir("emato_h_summary");
  auto cfg = tiny_config(dir.string());
  const auto artifacts = harness::run_experiment(cfg);
  const auto rows = read_csv(dir / "summary.csv");
  REQUIRE(rows.size() == artifacts.size() + 1);
  for (const auto& art : artifacts) {
    double mean = 0.0;
    for (double v : art.result.final_best) mean += v;
    mean /= static_cast<double>(art.result.final_best.size());
    const double reported = std::stod(rows[static_cast<std::size_t>(art.run_id) + 1][3]);
    CHECK(std::abs(reported - mean) <= 1e-12);
  }
  fs::remove_all(dir);
}

TEST_CASE("persisted per-task counters respect the evaluation budget") {
  const auto dir = temp_dir("emato_h_evals");
  auto cfg = tiny_config(dir.string());
  cfg.repeats = 1;
  harness::run_experiment(cfg);
  const auto rows = read_csv(dir / "run_0_evals.csv");
  REQUIRE(rows.size() == 51);  // header + one row per task
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const long evals = std::stol(rows[i][1]);
    CHECK(evals <= cfg.algo.max_evals_per_task);
    CHECK(evals >= cfg.algo.pop_size_per_task);
  }
  fs::remove_all(dir);
}

TEST_CASE("st_de metrics files contain only empty-network rows") {
  const auto dir = temp_dir("emato_h_stde");
  auto cfg = tiny_config(dir.string());
  cfg.algo.algorithm = algos::Algorithm::ST_DE;
  cfg.repeats = 1;
  harness::run_experiment(cfg);
  const auto rows = read_csv(dir / "run_0_metrics.csv");
  REQUIRE(rows.size() > 1);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][2] == "0");
  fs::remove_all(dir);
}

TEST_CASE("trace files round trip the in-memory traces exactly") {
  const auto dir = temp_dir("emato_h_trace");
  auto cfg = tiny_config(dir.string());
  cfg.repeats = 1;
  const auto artifacts = harness::run_experiment(cfg);
  const auto trace = harness::read_trace_csv(artifacts[0].trace_path);
  const auto& res = artifacts[0].result;
  REQUIRE(trace.best.size() == res.best_by_generation.size());
  for (std::size_t g = 0; g < trace.best.size(); ++g) {
    CHECK(trace.evals[g] == res.evals_by_generation[g]);
    REQUIRE(trace.best[g].size() == res.best_by_generation[g].size());
    for (std::size_t t = 0; t < trace.best[g].size(); ++t) {
      CHECK(trace.best[g][t] == res.best_by_generation[g][t]);
    }
  }
  fs::remove_all(dir);
}

TEST_CASE("degenerate sweep awards every best and worst to its only cell") {
  const auto dir = temp_dir("emato_h_sweep1");
  auto cfg = tiny_config(dir.string());
  const auto report = harness::sweep(cfg, {3}, {2});
  REQUIRE(report.cells.size() == 1);
  const long expected = static_cast<long>(cfg.repeats) * 50;
  CHECK(report.cells[0].best_total == expected);
  CHECK(report.cells[0].worst_total == expected);
  for (const auto& row : report.per_task) {
    CHECK(row[0].first == cfg.repeats);
    CHECK(row[0].second == cfg.repeats);
  }
  fs::remove_all(dir);
}

TEST_CASE("sweep counting conserves one best and one worst per task and repeat") {
  const auto dir = temp_dir("emato_h_sweep2");
  auto cfg = tiny_config(dir.string());
  const auto report = harness::sweep(cfg, {2, 5}, {1, 3});
  REQUIRE(report.cells.size() == 4);
  for (const auto& row : report.per_task) {
    int best = 0, worst = 0;
    for (const auto& [b, w] : row) {
      best += b;
      worst += w;
    }
    CHECK(best == cfg.repeats);
    CHECK(worst == cfg.repeats);
  }
  long best_total = 0;
  for (const auto& c : report.cells) best_total += c.best_total;
  CHECK(best_total == static_cast<long>(cfg.repeats) * 50);
  fs::remove_all(dir);
}

TEST_CASE("sweep density column depends on N only") {
  const auto dir = temp_dir("emato_h_sweep3");
  harness::RunConfig cfg;
  cfg.problem.set_id = bench::SetId::P1;
  cfg.problem.dim = 4;
  cfg.problem.seed = 5;
  cfg.algo.pop_size_per_task = 8;
  cfg.algo.max_evals_per_task = 120;
  cfg.algo.seed = 9;
  cfg.repeats = 1;
  cfg.output_dir = dir.string();
  const auto report = harness::sweep(cfg, {1}, {3, 5});
  const auto rows = read_csv(report.raw_path);
  // cell,k,n,metric,mean,stddev,defined,total
  bool saw3 = false, saw5 = false;
  for (const auto& row : rows) {
    if (row.size() < 6 || row[3] != "D") continue;
    const double mean = std::stod(row[4]);
    const double stddev = std::stod(row[5]);
    CHECK(stddev == 0.0);
    if (row[2] == "3") {
      CHECK(mean == doctest::Approx(3.0 / 49.0).epsilon(1e-12));
      saw3 = true;
    }
    if (row[2] == "5") {
      CHECK(mean == doctest::Approx(5.0 / 49.0).epsilon(1e-12));
      saw5 = true;
    }
  }
  CHECK(saw3);
  CHECK(saw5);
  fs::remove_all(dir);
}

TEST_CASE("compare: an algorithm against itself yields identical curves") {
  const auto dir = temp_dir("emato_h_cmp1");
  auto cfg = tiny_config((dir / "runs").string());
  cfg.repeats = 2;
  const auto artifacts = harness::run_experiment(cfg);
  const auto problem = cfg.problem.materialize();
  harness::AlgoRuns entry;
  entry.label = "mkt";
  entry.problem_identity = harness::problem_identity(problem);
  for (const auto& art : artifacts) entry.runs.push_back(art.result);
  const auto curves = harness::compare_convergence({entry, entry}, dir.string());
  REQUIRE(curves.size() == 2);
  CHECK(curves[0].evals == curves[1].evals);
  CHECK(curves[0].mean_best == curves[1].mean_best);
  fs::remove_all(dir);
}

TEST_CASE("compare curves equal a recomputation from the raw trace files") {
  const auto dir = temp_dir("emato_h_cmp2");
  auto cfg = tiny_config((dir / "runs").string());
  cfg.repeats = 2;
  const auto artifacts = harness::run_experiment(cfg);
  const auto problem = cfg.problem.materialize();
  harness::AlgoRuns a;
  a.label = "one";
  a.problem_identity = harness::problem_identity(problem);
  for (const auto& art : artifacts) a.runs.push_back(art.result);
  auto b = a;
  b.label = "two";
  const auto curves = harness::compare_convergence({a, b}, dir.string());

  std::vector<harness::TraceData> traces;
  for (const auto& art : artifacts) traces.push_back(harness::read_trace_csv(art.trace_path));
  std::size_t rows = traces[0].best.size();
  for (const auto& t : traces) rows = std::min(rows, t.best.size());
  REQUIRE(curves[0].mean_best.size() == rows);
  for (std::size_t g = 0; g < rows; ++g) {
    double mean = 0.0;
    for (const auto& t : traces) {
      double task_mean = 0.0;
      for (double v : t.best[g]) task_mean += v;
      task_mean /= static_cast<double>(t.best[g].size());
      mean += task_mean;
    }
    mean /= static_cast<double>(traces.size());
    CHECK(std::abs(curves[0].mean_best[g] - mean) <= 1e-12);
  }
  fs::remove_all(dir);
}

TEST_CASE("compare SVG holds one polyline per algorithm plus axis labels") {
  const auto dir = temp_dir("emato_h_cmp3");
  auto cfg = tiny_config((dir / "runs").string());
  cfg.repeats = 1;
  const auto artifacts = harness::run_experiment(cfg);
  const auto problem = cfg.problem.materialize();
  harness::AlgoRuns a;
  a.label = "alpha";
  a.problem_identity = harness::problem_identity(problem);
  a.runs.push_back(artifacts[0].result);
  auto b = a;
  b.label = "beta";
  harness::compare_convergence({a, b}, dir.string());
  const auto svg = slurp(dir / "compare_curves.svg");
  std::size_t polylines = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos;
       ++polylines, ++pos) {
  }
  CHECK(polylines == 2);
  CHECK(svg.find("evaluations") != std::string::npos);
  CHECK(svg.find("mean best") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("compare rejects mismatched problems and single entries") {
  harness::AlgoRuns a;
  a.label = "x";
  a.problem_identity = "P1|4|1|50";
  a.runs.emplace_back();
  a.runs[0].best_by_generation = {{1.0}};
  a.runs[0].evals_by_generation = {1};
  a.runs[0].final_best = {1.0};
  auto b = a;
  b.problem_identity = "P2|4|1|50";
  CHECK_THROWS_AS(harness::compare_convergence({a, b}, "/tmp/emato_cmp_err"),
                  ConfigError);
  CHECK_THROWS_AS(harness::compare_convergence({a}, "/tmp/emato_cmp_err"), ConfigError);
}

TEST_CASE("config JSON: round trip, overrides, and unknown keys") {
  harness::RunConfig cfg = tiny_config("somewhere");
  const auto text = harness::to_json(cfg);
  const auto back = harness::run_config_from_json(text);
  CHECK(back.algo.algorithm == cfg.algo.algorithm);
  CHECK(back.algo.seed == cfg.algo.seed);
  CHECK(back.algo.k_clusters == cfg.algo.k_clusters);
  CHECK(back.repeats == cfg.repeats);
  CHECK(back.output_dir == cfg.output_dir);
  CHECK(back.problem.set_id == cfg.problem.set_id);

  CHECK_THROWS_AS(harness::run_config_from_json("{\"algo\":{\"popsize\":3}}"),
                  ConfigError);
  CHECK_THROWS_AS(harness::run_config_from_json("{\"mystery\":1}"), ConfigError);
  CHECK_THROWS_AS(harness::run_config_from_json("not json"), ConfigError);

  // The top-level budget key lands on the algorithm config.
  const auto overridden = harness::run_config_from_json(
      "{\"algo\":{\"algorithm\":\"ST_DE\"},\"max_evals_per_task\":123}");
  CHECK(overridden.algo.max_evals_per_task == 123);
}

TEST_SUITE_END();
