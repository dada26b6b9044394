#include "emato/ktrn.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "emato/errors.hpp"
#include "json.hpp"

namespace emato::ktrn {

GenerationGraph::GenerationGraph(int generation, int n, std::vector<int> counts)
    : generation_(generation), n_(n), counts_(std::move(counts)) {
  if (n_ < 1 || counts_.size() != static_cast<std::size_t>(n_) * n_) {
    throw std::invalid_argument("GenerationGraph: bad matrix size");
  }
  for (int i = 0; i < n_; ++i) {
    if (count(i, i) != 0) {
      throw std::invalid_argument("GenerationGraph: nonzero diagonal");
    }
  }
}

int GenerationGraph::distinct_edge_count() const {
  int edges = 0;
  for (int c : counts_) edges += (c > 0) ? 1 : 0;
  return edges;
}

long GenerationGraph::total_events() const {
  long total = 0;
  for (int c : counts_) total += c;
  return total;
}

std::vector<std::pair<int, int>> GenerationGraph::simple_edges() const {
  std::vector<std::pair<int, int>> edges;
  for (int s = 0; s < n_; ++s) {
    for (int t = 0; t < n_; ++t) {
      if (count(s, t) > 0) edges.emplace_back(s, t);
    }
  }
  return edges;
}

Recorder::Recorder(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Recorder: n must be >= 1");
  counts_.assign(static_cast<std::size_t>(n) * n, 0);
}

void Recorder::record(const TransferEvent& ev) {
  if (ev.generation != current_generation_) {
    throw std::logic_error("Recorder: event for a generation that is not open");
  }
  if (ev.source < 0 || ev.source >= n_ || ev.target < 0 || ev.target >= n_) {
    throw std::invalid_argument("Recorder: task index out of range");
  }
  if (ev.source == ev.target) {
    throw std::invalid_argument("Recorder: self-loop transfer rejected");
  }
  if (ev.count < 1) throw std::invalid_argument("Recorder: count must be >= 1");
  counts_[static_cast<std::size_t>(ev.source) * n_ + ev.target] += ev.count;
}

const GenerationGraph& Recorder::finalize(int generation) {
  if (generation != current_generation_) {
    throw std::logic_error("Recorder: finalize out of order");
  }
  history_.emplace_back(generation, n_, counts_);
  std::fill(counts_.begin(), counts_.end(), 0);
  ++current_generation_;
  return history_.back();
}

std::string to_jsonl(const std::vector<GenerationGraph>& graphs) {
  std::ostringstream out;
  for (const auto& g : graphs) {
    out << "{\"generation\":" << g.generation() << ",\"n\":" << g.n()
        << ",\"edges\":[";
    bool first = true;
    for (const auto& [s, t] : g.simple_edges()) {
      if (!first) out << ",";
      first = false;
      out << "[" << s << "," << t << "," << g.count(s, t) << "]";
    }
    out << "]}\n";
  }
  return out.str();
}

std::vector<GenerationGraph> from_jsonl(const std::string& text) {
  std::vector<GenerationGraph> graphs;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
      const int generation = doc.at("generation").get<int>();
      const int n = doc.at("n").get<int>();
      if (n < 1) throw ConfigError("bad transfer-network record: n < 1");
      std::vector<int> counts(static_cast<std::size_t>(n) * n, 0);
      for (const auto& edge : doc.at("edges")) {
        const int s = edge.at(0).get<int>();
        const int t = edge.at(1).get<int>();
        const int c = edge.at(2).get<int>();
        if (s < 0 || s >= n || t < 0 || t >= n || s == t || c < 1) {
          throw ConfigError("bad transfer-network record: invalid edge");
        }
        counts[static_cast<std::size_t>(s) * n + t] = c;
      }
      graphs.emplace_back(generation, n, std::move(counts));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad transfer-network record: ") + e.what());
    }
  }
  return graphs;
}

void write_jsonl(const std::vector<GenerationGraph>& graphs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << to_jsonl(graphs);
}

std::vector<GenerationGraph> read_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open transfer-network file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_jsonl(buf.str());
}

}  // namespace emato::ktrn
