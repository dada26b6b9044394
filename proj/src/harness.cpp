#include "emato/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "emato/ktrn.hpp"
#include "emato/netmetrics.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace emato::harness {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  return out;
}

void write_trace_csv(const fs::path& path, const algos::RunResult& r) {
  auto out = open_out(path);
  const std::size_t n = r.final_best.size();
  out << "generation,evals";
  for (std::size_t t = 0; t < n; ++t) out << ",t" << t;
  out << "\n";
  for (std::size_t g = 0; g < r.best_by_generation.size(); ++g) {
    out << g << ',' << r.evals_by_generation[g];
    for (double v : r.best_by_generation[g]) out << ',' << fmt_double(v);
    out << "\n";
  }
}

}  // namespace

bench::ProblemSet ProblemSpec::materialize() const {
  if (!path.empty()) return bench::load_problem_set(path);
  if (!set_id) throw ConfigError("problem: need a set id or a file path");
  return bench::generate_problem_set(*set_id, dim, seed);
}

std::string problem_identity(const bench::ProblemSet& ps) {
  std::ostringstream id;
  id << bench::set_name(ps.set_id) << '|' << ps.dim << '|' << ps.seed << '|'
     << ps.task_count();
  return id.str();
}

namespace {

void algo_from_json(const nlohmann::json& doc, algos::AlgoConfig& a) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "algorithm") {
      const auto name = value.get<std::string>();
      const auto algo = algos::algorithm_from_name(name);
      if (!algo) throw ConfigError("config: unknown algorithm: " + name);
      a.algorithm = *algo;
    } else if (key == "seed") {
      a.seed = value.get<std::uint64_t>();
    } else if (key == "pop_size_per_task") {
      a.pop_size_per_task = value.get<int>();
    } else if (key == "max_evals_per_task") {
      a.max_evals_per_task = value.get<long>();
    } else if (key == "f") {
      a.f = value.get<double>();
    } else if (key == "cr") {
      a.cr = value.get<double>();
    } else if (key == "eta_c") {
      a.eta_c = value.get<double>();
    } else if (key == "eta_m") {
      a.eta_m = value.get<double>();
    } else if (key == "p_m") {
      a.p_m = value.get<double>();
    } else if (key == "rmp") {
      a.rmp = value.get<double>();
    } else if (key == "mfea_population_cap") {
      a.mfea_population_cap = value.get<int>();
    } else if (key == "k") {
      a.k_clusters = value.get<int>();
    } else if (key == "n") {
      a.n_assist = value.get<int>();
    } else if (key == "transfer_interval") {
      a.transfer_interval = value.get<int>();
    } else if (key == "elite_fraction") {
      a.elite_fraction = value.get<double>();
    } else if (key == "tp0") {
      a.tp0 = value.get<double>();
    } else if (key == "tp_min") {
      a.tp_min = value.get<double>();
    } else if (key == "tp_max") {
      a.tp_max = value.get<double>();
    } else if (key == "shrink") {
      a.shrink = value.get<double>();
    } else if (key == "expand") {
      a.expand = value.get<double>();
    } else if (key == "archive_capacity") {
      a.archive_capacity = value.get<int>();
    } else {
      throw ConfigError("config: unknown algo key: " + key);
    }
  }
}

nlohmann::json algo_to_json(const algos::AlgoConfig& a) {
  nlohmann::json doc;
  doc["algorithm"] = algos::algorithm_name(a.algorithm);
  doc["seed"] = a.seed;
  doc["pop_size_per_task"] = a.pop_size_per_task;
  doc["max_evals_per_task"] = a.max_evals_per_task;
  doc["f"] = a.f;
  doc["cr"] = a.cr;
  doc["eta_c"] = a.eta_c;
  doc["eta_m"] = a.eta_m;
  doc["p_m"] = a.p_m;
  doc["rmp"] = a.rmp;
  doc["mfea_population_cap"] = a.mfea_population_cap;
  doc["k"] = a.k_clusters;
  doc["n"] = a.n_assist;
  doc["transfer_interval"] = a.transfer_interval;
  doc["elite_fraction"] = a.elite_fraction;
  doc["tp0"] = a.tp0;
  doc["tp_min"] = a.tp_min;
  doc["tp_max"] = a.tp_max;
  doc["shrink"] = a.shrink;
  doc["expand"] = a.expand;
  doc["archive_capacity"] = a.archive_capacity;
  return doc;
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  RunConfig cfg;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "problem") {
        for (const auto& [pkey, pvalue] : value.items()) {
          if (pkey == "set_id") {
            cfg.problem.set_id = bench::set_from_name(pvalue.get<std::string>());
          } else if (pkey == "dim") {
            cfg.problem.dim = pvalue.get<int>();
          } else if (pkey == "seed") {
            cfg.problem.seed = pvalue.get<std::uint64_t>();
          } else if (pkey == "path") {
            cfg.problem.path = pvalue.get<std::string>();
          } else {
            throw ConfigError("config: unknown problem key: " + pkey);
          }
        }
      } else if (key == "algo") {
        algo_from_json(value, cfg.algo);
      } else if (key == "repeats") {
        cfg.repeats = value.get<int>();
      } else if (key == "output_dir") {
        cfg.output_dir = value.get<std::string>();
      } else if (key == "record_ktrn") {
        cfg.record_ktrn = value.get<bool>();
      } else if (key == "max_evals_per_task") {
        cfg.algo.max_evals_per_task = value.get<long>();
      } else {
        throw ConfigError("config: unknown key: " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON schema error: ") + e.what());
  }
  return cfg;
}

std::string to_json(const RunConfig& cfg) {
  nlohmann::json doc;
  if (!cfg.problem.path.empty()) {
    doc["problem"]["path"] = cfg.problem.path;
  } else if (cfg.problem.set_id) {
    doc["problem"]["set_id"] = bench::set_name(*cfg.problem.set_id);
    doc["problem"]["dim"] = cfg.problem.dim;
    doc["problem"]["seed"] = cfg.problem.seed;
  }
  doc["algo"] = algo_to_json(cfg.algo);
  doc["repeats"] = cfg.repeats;
  doc["output_dir"] = cfg.output_dir;
  doc["record_ktrn"] = cfg.record_ktrn;
  return doc.dump(2) + "\n";
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_config_from_json(buf.str());
}

std::vector<RunArtifacts> run_experiment(const RunConfig& cfg) {
  if (cfg.repeats < 1) throw ConfigError("config: repeats must be >= 1");
  const bench::ProblemSet problem = cfg.problem.materialize();
  cfg.algo.validate(problem.task_count());

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  bench::save_problem_set(problem, (dir / "problem.json").string());

  std::vector<RunArtifacts> artifacts;
  artifacts.reserve(static_cast<std::size_t>(cfg.repeats));
  std::vector<netmetrics::MetricsRecord> pooled_records;
  for (int r = 0; r < cfg.repeats; ++r) {
    algos::AlgoConfig run_cfg = cfg.algo;
    run_cfg.seed = cfg.algo.seed + static_cast<std::uint64_t>(r);
    ktrn::Recorder recorder(problem.task_count());
    RunArtifacts art;
    art.run_id = r;
    art.seed = run_cfg.seed;
    art.result = algos::run_algorithm(problem, run_cfg, recorder);

    const std::string stem = "run_" + std::to_string(r);
    art.trace_path = (dir / (stem + "_trace.csv")).string();
    write_trace_csv(art.trace_path, art.result);

    {
      // Persisted per-task counters; the budget contract is checkable from
      // this file alone.
      auto out = open_out(dir / (stem + "_evals.csv"));
      out << "task,evals\n";
      for (std::size_t t = 0; t < art.result.eval_counts.size(); ++t) {
        out << t << ',' << art.result.eval_counts[t] << "\n";
      }
    }

    if (cfg.record_ktrn) {
      art.ktrn_path = (dir / (stem + "_ktrn.jsonl")).string();
      ktrn::write_jsonl(recorder.history(), art.ktrn_path);
    }

    std::vector<netmetrics::MetricsRecord> records;
    records.reserve(recorder.history().size());
    for (const auto& g : recorder.history()) {
      records.push_back(netmetrics::compute_all(g));
    }
    art.metrics_path = (dir / (stem + "_metrics.csv")).string();
    {
      auto out = open_out(art.metrics_path);
      netmetrics::write_metrics_csv(out, r, records);
    }
    pooled_records.insert(pooled_records.end(), records.begin(), records.end());
    artifacts.push_back(std::move(art));
  }

  // Aggregate report over all generations of all runs, one row per metric in
  // the mean (std) table convention; assortativity additionally gets the
  // zeros-for-NA table form.
  if (!pooled_records.empty()) {
    const auto agg = netmetrics::aggregate(pooled_records);
    auto out = open_out(dir / "metrics_aggregate.csv");
    out << "metric,mean_std,mean_std_table,defined,total\n";
    const auto row = [&](const char* name, const netmetrics::MetricSummary& s,
                         bool na_as_zero) {
      out << name << ',' << netmetrics::format_cell(s) << ','
          << netmetrics::format_cell(s, na_as_zero) << ',' << s.defined << ','
          << s.total << "\n";
    };
    row("D", agg.density, false);
    row("C", agg.clustering, false);
    row("DIA", agg.diameter, false);
    row("A", agg.assortativity, true);
    row("SAC", agg.sac, false);
    row("H", agg.heterogeneity, false);
  }

  {
    auto out = open_out(dir / "summary.csv");
    out << "run_id,seed,algorithm,mean_best,total_evals\n";
    for (const auto& art : artifacts) {
      double mean = 0.0;
      for (double v : art.result.final_best) mean += v;
      mean /= static_cast<double>(art.result.final_best.size());
      std::uint64_t total = 0;
      for (long c : art.result.eval_counts) total += static_cast<std::uint64_t>(c);
      out << art.run_id << ',' << art.seed << ','
          << algos::algorithm_name(cfg.algo.algorithm) << ',' << fmt_double(mean)
          << ',' << total << "\n";
    }
  }
  return artifacts;
}

SweepReport sweep(const RunConfig& base, const std::vector<int>& k_values,
                  const std::vector<int>& n_values) {
  if (k_values.empty() || n_values.empty()) {
    throw ConfigError("sweep: K and N grids must be non-empty");
  }
  const bench::ProblemSet problem = base.problem.materialize();
  const int n_tasks = problem.task_count();

  std::vector<SweepCell> cells;
  for (int k : k_values) {
    for (int nv : n_values) {
      algos::AlgoConfig cell_cfg = base.algo;
      cell_cfg.algorithm = algos::Algorithm::EMATO_MKT;
      cell_cfg.k_clusters = k;
      cell_cfg.n_assist = nv;
      cell_cfg.validate(n_tasks);  // reject the whole grid before any compute
      cells.push_back({k, nv, 0, 0});
    }
  }

  const fs::path dir(base.output_dir);
  fs::create_directories(dir);

  const std::size_t cell_count = cells.size();
  // finals[cell][repeat][task]
  std::vector<std::vector<std::vector<double>>> finals(cell_count);
  std::vector<netmetrics::AggregateReport> aggregates(cell_count);

  for (std::size_t c = 0; c < cell_count; ++c) {
    RunConfig cell_run = base;
    cell_run.algo.algorithm = algos::Algorithm::EMATO_MKT;
    cell_run.algo.k_clusters = cells[c].k_clusters;
    cell_run.algo.n_assist = cells[c].n_assist;
    cell_run.record_ktrn = true;  // the metrics grid is built from these files
    cell_run.output_dir =
        (dir / ("K" + std::to_string(cells[c].k_clusters) + "_N" +
                std::to_string(cells[c].n_assist)))
            .string();
    const auto artifacts = run_experiment(cell_run);
    std::vector<netmetrics::MetricsRecord> pooled;
    for (const auto& art : artifacts) {
      finals[c].push_back(art.result.final_best);
      for (const auto& g : ktrn::read_jsonl(art.ktrn_path)) {
        pooled.push_back(netmetrics::compute_all(g));
      }
    }
    if (pooled.empty()) {
      throw ConfigError("sweep: budget too small to run any generation");
    }
    aggregates[c] = netmetrics::aggregate(pooled);
  }

  SweepReport report;
  report.cells = std::move(cells);
  report.per_task.assign(static_cast<std::size_t>(n_tasks),
                         std::vector<std::pair<int, int>>(cell_count, {0, 0}));

  const int repeats = base.repeats;
  for (int t = 0; t < n_tasks; ++t) {
    for (int r = 0; r < repeats; ++r) {
      std::size_t best_cell = 0;
      std::size_t worst_cell = 0;
      for (std::size_t c = 1; c < cell_count; ++c) {
        const double v = finals[c][static_cast<std::size_t>(r)][static_cast<std::size_t>(t)];
        if (v < finals[best_cell][static_cast<std::size_t>(r)][static_cast<std::size_t>(t)]) {
          best_cell = c;
        }
        if (v > finals[worst_cell][static_cast<std::size_t>(r)][static_cast<std::size_t>(t)]) {
          worst_cell = c;
        }
      }
      ++report.per_task[static_cast<std::size_t>(t)][best_cell].first;
      ++report.per_task[static_cast<std::size_t>(t)][worst_cell].second;
      ++report.cells[best_cell].best_total;
      ++report.cells[worst_cell].worst_total;
    }
  }

  const auto cell_name = [&](std::size_t c) {
    return "K" + std::to_string(report.cells[c].k_clusters) + "_N" +
           std::to_string(report.cells[c].n_assist);
  };

  report.counts_path = (dir / "sweep_counts.csv").string();
  {
    auto out = open_out(report.counts_path);
    out << "task";
    for (std::size_t c = 0; c < cell_count; ++c) out << ',' << cell_name(c);
    out << "\n";
    for (int t = 0; t < n_tasks; ++t) {
      out << t;
      for (std::size_t c = 0; c < cell_count; ++c) {
        const auto& [b, w] = report.per_task[static_cast<std::size_t>(t)][c];
        out << ',' << b << " - " << w;
      }
      out << "\n";
    }
    out << "total";
    for (std::size_t c = 0; c < cell_count; ++c) {
      out << ',' << report.cells[c].best_total << " - " << report.cells[c].worst_total;
    }
    out << "\n";
  }

  report.grid_path = (dir / "sweep_metrics_grid.csv").string();
  {
    auto out = open_out(report.grid_path);
    out << "metric";
    for (std::size_t c = 0; c < cell_count; ++c) out << ',' << cell_name(c);
    out << "\n";
    const auto row = [&](const char* name, auto pick) {
      out << name;
      for (std::size_t c = 0; c < cell_count; ++c) {
        out << ',' << netmetrics::format_cell(pick(aggregates[c]));
      }
      out << "\n";
    };
    row("D", [](const netmetrics::AggregateReport& a) { return a.density; });
    row("C", [](const netmetrics::AggregateReport& a) { return a.clustering; });
    row("H", [](const netmetrics::AggregateReport& a) { return a.heterogeneity; });
    row("SAC", [](const netmetrics::AggregateReport& a) { return a.sac; });
  }

  report.raw_path = (dir / "sweep_metrics_raw.csv").string();
  {
    auto out = open_out(report.raw_path);
    out << "cell,k,n,metric,mean,stddev,defined,total\n";
    for (std::size_t c = 0; c < cell_count; ++c) {
      const auto put = [&](const char* name, const netmetrics::MetricSummary& s) {
        out << cell_name(c) << ',' << report.cells[c].k_clusters << ','
            << report.cells[c].n_assist << ',' << name << ',' << fmt_double(s.mean)
            << ',' << fmt_double(s.stddev) << ',' << s.defined << ',' << s.total
            << "\n";
      };
      put("D", aggregates[c].density);
      put("C", aggregates[c].clustering);
      put("DIA", aggregates[c].diameter);
      put("A", aggregates[c].assortativity);
      put("SAC", aggregates[c].sac);
      put("H", aggregates[c].heterogeneity);
    }
  }
  return report;
}

namespace {

struct SvgBounds {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
};

void write_compare_svg(const fs::path& path, const std::vector<Curve>& curves) {
  constexpr int kWidth = 720;
  constexpr int kHeight = 440;
  constexpr int kMargin = 60;
  constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                      "#d62728", "#9467bd", "#8c564b"};
  SvgBounds b;
  bool first = true;
  for (const auto& curve : curves) {
    for (std::size_t i = 0; i < curve.evals.size(); ++i) {
      const double x = curve.evals[i];
      const double y = std::log10(std::max(curve.mean_best[i], 1e-16));
      if (first) {
        b = {x, x, y, y};
        first = false;
      } else {
        b.x_min = std::min(b.x_min, x);
        b.x_max = std::max(b.x_max, x);
        b.y_min = std::min(b.y_min, y);
        b.y_max = std::max(b.y_max, y);
      }
    }
  }
  if (b.x_max <= b.x_min) b.x_max = b.x_min + 1.0;
  if (b.y_max <= b.y_min) b.y_max = b.y_min + 1.0;

  const auto sx = [&](double x) {
    return kMargin + (x - b.x_min) / (b.x_max - b.x_min) * (kWidth - 2 * kMargin);
  };
  const auto sy = [&](double y) {
    return kHeight - kMargin -
           (y - b.y_min) / (b.y_max - b.y_min) * (kHeight - 2 * kMargin);
  };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">evaluations</text>\n";
  out << "<text x=\"18\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << kHeight / 2
      << ")\">mean best (log10)</text>\n";
  char buf[64];
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (std::size_t i = 0; i < curves[c].evals.size(); ++i) {
      const double x = sx(curves[c].evals[i]);
      const double y = sy(std::log10(std::max(curves[c].mean_best[i], 1e-16)));
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x, y);
      out << buf;
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin + 5 << "\" y=\"" << kMargin + 16 * c
        << "\" fill=\"" << color << "\" font-size=\"12\">" << curves[c].label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace

std::vector<Curve> compare_convergence(const std::vector<AlgoRuns>& inputs,
                                       const std::string& output_dir) {
  if (inputs.size() < 2) {
    throw ConfigError("compare: need at least two algorithm entries");
  }
  for (const auto& in : inputs) {
    if (in.runs.empty()) throw ConfigError("compare: entry without runs: " + in.label);
    if (in.problem_identity != inputs[0].problem_identity) {
      throw ConfigError("compare: mismatched problems between entries");
    }
  }

  std::vector<Curve> curves;
  curves.reserve(inputs.size());
  for (const auto& in : inputs) {
    std::size_t rows = in.runs[0].best_by_generation.size();
    for (const auto& run : in.runs) {
      rows = std::min(rows, run.best_by_generation.size());
    }
    Curve curve;
    curve.label = in.label;
    for (std::size_t g = 0; g < rows; ++g) {
      double evals = 0.0;
      double best = 0.0;
      for (const auto& run : in.runs) {
        double task_mean = 0.0;
        for (double v : run.best_by_generation[g]) task_mean += v;
        task_mean /= static_cast<double>(run.best_by_generation[g].size());
        best += task_mean;
        evals += static_cast<double>(run.evals_by_generation[g]);
      }
      curve.evals.push_back(evals / static_cast<double>(in.runs.size()));
      curve.mean_best.push_back(best / static_cast<double>(in.runs.size()));
    }
    curves.push_back(std::move(curve));
  }

  const fs::path dir(output_dir);
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "compare_curves.csv");
    out << "algorithm,row,evals,mean_best\n";
    for (const auto& curve : curves) {
      for (std::size_t g = 0; g < curve.evals.size(); ++g) {
        out << curve.label << ',' << g << ',' << fmt_double(curve.evals[g]) << ','
            << fmt_double(curve.mean_best[g]) << "\n";
      }
    }
  }
  write_compare_svg(dir / "compare_curves.svg", curves);
  return curves;
}

TraceData read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  TraceData data;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty trace file: " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');  // generation index, implied by position
    std::getline(row, field, ',');
    data.evals.push_back(std::stoull(field));
    std::vector<double> best;
    while (std::getline(row, field, ',')) best.push_back(std::stod(field));
    data.best.push_back(std::move(best));
  }
  return data;
}

}  // namespace emato::harness
