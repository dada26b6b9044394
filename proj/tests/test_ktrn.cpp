#include "doctest.h"

#include <filesystem>
#include <map>

#include "emato/errors.hpp"
#include "emato/ktrn.hpp"
#include "emato/rng.hpp"
#include "oracles.hpp"

using namespace emato::ktrn;

TEST_SUITE_BEGIN("ktrn");

TEST_CASE("events accumulate counts; the simple view deduplicates") {
  Recorder rec(8);
  rec.record({0, 2, 5, 1});
  rec.record({0, 2, 5, 1});
  const auto& g = rec.finalize(0);
  CHECK(g.count(2, 5) == 2);
  CHECK(g.distinct_edge_count() == 1);
  CHECK(g.total_events() == 2);
}

TEST_CASE("self-loops and bad indices are rejected") {
  Recorder rec(4);
  CHECK_THROWS_AS(rec.record({0, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(rec.record({0, 4, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(rec.record({0, 0, 2, 0}), std::invalid_argument);
}

TEST_CASE("a generation without events finalizes to the zero matrix") {
  Recorder rec(5);
  const auto& g = rec.finalize(0);
  CHECK(g.distinct_edge_count() == 0);
  CHECK(g.total_events() == 0);
}

TEST_CASE("generations close strictly in order") {
  Recorder rec(4);
  rec.finalize(0);
  CHECK_THROWS_AS(rec.finalize(0), std::logic_error);  // double finalize
  CHECK_THROWS_AS(rec.finalize(5), std::logic_error);  // skipping ahead
  CHECK_THROWS_AS(rec.record({0, 1, 2, 1}), std::logic_error);  // closed generation
  rec.record({1, 1, 2, 1});
  rec.finalize(1);
  CHECK(rec.history().size() == 2);
}

TEST_CASE("adjacency row/column sums match a replay of the event log") {
  emato::Rng rng(606);
  const int n = 9;
  Recorder rec(n);
  std::map<std::pair<int, int>, int> tally;
  for (int g = 0; g < 4; ++g) {
    const int events = 5 + static_cast<int>(rng.index(20));
    for (int e = 0; e < events; ++e) {
      int s, t;
      do {
        s = static_cast<int>(rng.index(n));
        t = static_cast<int>(rng.index(n));
      } while (s == t);
      const int count = 1 + static_cast<int>(rng.index(3));
      rec.record({g, s, t, count});
      tally[{g, s * n + t}] += count;
    }
    rec.finalize(g);
  }
  for (const auto& graph : rec.history()) {
    long total_from_log = 0;
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        const auto it = tally.find({graph.generation(), s * n + t});
        const int expected = it == tally.end() ? 0 : it->second;
        CHECK(graph.count(s, t) == expected);
        total_from_log += expected;
      }
    }
    CHECK(graph.total_events() == total_from_log);
  }
}

TEST_CASE("graphs reject a nonzero diagonal") {
  std::vector<int> counts(9, 0);
  counts[0] = 1;
  CHECK_THROWS_AS(GenerationGraph(0, 3, std::move(counts)), std::invalid_argument);
}

TEST_CASE("JSONL round trip is lossless") {
  emato::Rng rng(9001);
  std::vector<GenerationGraph> graphs;
  for (int g = 0; g < 6; ++g) {
    auto random = oracles::random_digraph(7, 0.25, rng.next());
    std::vector<int> counts(49, 0);
    for (int s = 0; s < 7; ++s) {
      for (int t = 0; t < 7; ++t) counts[static_cast<std::size_t>(s) * 7 + t] = random.count(s, t);
    }
    graphs.emplace_back(g, 7, std::move(counts));
  }
  const std::string text = to_jsonl(graphs);
  const auto back = from_jsonl(text);
  REQUIRE(back.size() == graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) CHECK(back[i] == graphs[i]);
  // Serialization itself is stable.
  CHECK(to_jsonl(back) == text);
}

TEST_CASE("malformed JSONL records are configuration errors") {
  CHECK_THROWS_AS(from_jsonl("{\"generation\":0,\"n\":3,\"edges\":[[0,3,1]]}\n"),
                  emato::ConfigError);
  CHECK_THROWS_AS(from_jsonl("{\"generation\":0,\"n\":3,\"edges\":[[1,1,1]]}\n"),
                  emato::ConfigError);
  CHECK_THROWS_AS(from_jsonl("{\"generation\":0,\"n\":0,\"edges\":[]}\n"),
                  emato::ConfigError);
  CHECK_THROWS_AS(from_jsonl("not json\n"), emato::ConfigError);
}

TEST_CASE("JSONL file writing round trips") {
  const auto path = std::filesystem::temp_directory_path() / "ktrn_roundtrip.jsonl";
  std::vector<GenerationGraph> graphs;
  std::vector<int> counts(16, 0);
  counts[1] = 3;  // edge 0 -> 1
  graphs.emplace_back(0, 4, counts);
  write_jsonl(graphs, path.string());
  const auto back = read_jsonl(path.string());
  REQUIRE(back.size() == 1);
  CHECK(back[0].count(0, 1) == 3);
  std::filesystem::remove(path);
}

TEST_SUITE_END();
