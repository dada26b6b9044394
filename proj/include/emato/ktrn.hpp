#pragma once

#include <string>
#include <utility>
#include <vector>

namespace emato::ktrn {

// One knowledge-transfer occurrence: during `generation`, task `source`
// assisted task `target` `count` times.
struct TransferEvent {
  int generation = 0;
  int source = 0;
  int target = 0;
  int count = 1;
};

// Directed multigraph over task indices for a single generation, stored as an
// n x n count matrix with a zero diagonal.
class GenerationGraph {
 public:
  GenerationGraph(int generation, int n, std::vector<int> counts);

  int generation() const { return generation_; }
  int n() const { return n_; }
  int count(int source, int target) const {
    return counts_[static_cast<std::size_t>(source) * n_ + target];
  }
  bool has_edge(int source, int target) const { return count(source, target) > 0; }

  int distinct_edge_count() const;  // edges of the simple view
  long total_events() const;        // sum of all counts

  // Simple-view edges sorted by (source, target).
  std::vector<std::pair<int, int>> simple_edges() const;

  bool operator==(const GenerationGraph&) const = default;

 private:
  int generation_;
  int n_;
  std::vector<int> counts_;
};

// Accumulates the events of the currently open generation; generations are
// finalized strictly in order 0, 1, 2, ...
class Recorder {
 public:
  explicit Recorder(int n);

  int n() const { return n_; }
  int open_generation() const { return current_generation_; }

  // Rejects self-loops, out-of-range indices, and events for any generation
  // other than the open one.
  void record(const TransferEvent& ev);

  // Snapshots the open generation (which must be `generation`) and opens the
  // next one; finalizing the same generation twice is an error.
  const GenerationGraph& finalize(int generation);

  const std::vector<GenerationGraph>& history() const { return history_; }

 private:
  int n_;
  int current_generation_ = 0;
  std::vector<int> counts_;
  std::vector<GenerationGraph> history_;
};

// JSON-lines persistence: one record per generation,
// {"generation":g,"n":n,"edges":[[source,target,count],...]}.
std::string to_jsonl(const std::vector<GenerationGraph>& graphs);
std::vector<GenerationGraph> from_jsonl(const std::string& text);
void write_jsonl(const std::vector<GenerationGraph>& graphs, const std::string& path);
std::vector<GenerationGraph> read_jsonl(const std::string& path);

}  // namespace emato::ktrn
