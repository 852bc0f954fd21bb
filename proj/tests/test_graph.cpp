#include <filesystem>
#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace graphplan;
using namespace graphplan::testing;

namespace {

EventChain chain(std::initializer_list<const char*> events) {
  EventChain c;
  c.story_id = "s";
  for (const char* e : events) c.events.push_back(parse_event(e));
  return c;
}

std::vector<std::string> succ_names(const EventGraph& g, const std::string& e) {
  std::vector<std::string> out;
  for (EventId id : successors(g, *g.find(e))) out.push_back(g.event(id).surface());
  return out;
}

// Enumerates every id sequence of the given length and keeps the ones that
// satisfy the definition; no pruning, no shared code with count_sequences.
std::uint64_t naive_count(const EventGraph& g, int length) {
  std::uint64_t count = 0;
  std::vector<EventId> seq(static_cast<std::size_t>(length), 0);
  const auto n = static_cast<EventId>(g.size());
  std::function<void(int)> rec = [&](int pos) {
    if (pos == length) {
      if (g.start_count(seq[0]) <= 0) return;
      for (int i = 1; i < length; ++i) {
        if (!g.has_edge(seq[i - 1], seq[i])) return;
      }
      for (int i = 0; i < length; ++i) {
        for (int j = i + 1; j < length; ++j) {
          if (seq[i] != seq[j] && g.is_exclusive(seq[i], seq[j])) return;
        }
      }
      ++count;
      return;
    }
    for (EventId e = 0; e < n; ++e) {
      seq[static_cast<std::size_t>(pos)] = e;
      rec(pos + 1);
    }
  };
  if (n > 0) rec(0);
  return count;
}

}  // namespace

TEST(BuildGraph, SingleChain) {
  const EventGraph g = build_graph(0, {chain({"buy", "wear", "break"})});
  EXPECT_EQ(g.size(), 3u);
  const EventId buy = *g.find("buy"), wear = *g.find("wear"), brk = *g.find("break");
  ASSERT_EQ(g.out_edges(buy).size(), 1u);
  EXPECT_EQ(g.out_edges(buy)[0], (Edge{wear, 1}));
  EXPECT_EQ(g.out_edges(wear)[0], (Edge{brk, 1}));
  EXPECT_EQ(g.start_count(buy), 1);
  EXPECT_EQ(g.start_count(wear), 0);
  EXPECT_TRUE(g.exclusive_pairs().empty());
}

TEST(BuildGraph, CountsAccumulate) {
  const EventGraph g = build_graph(0, {chain({"a", "b"}), chain({"a", "b"})});
  EXPECT_EQ(g.out_edges(*g.find("a"))[0].count, 2);
  EXPECT_EQ(g.start_count(*g.find("a")), 2);
}

TEST(BuildGraph, RepeatedNodesAreReused) {
  const EventGraph g = build_graph(0, {chain({"a", "b", "a"})});
  EXPECT_EQ(g.size(), 2u);
  EXPECT_TRUE(g.has_edge(*g.find("a"), *g.find("b")));
  EXPECT_TRUE(g.has_edge(*g.find("b"), *g.find("a")));
}

TEST(BuildGraph, EmptyInputAndEmptyChains) {
  EXPECT_TRUE(build_graph(3, {}).empty());
  const EventGraph g = build_graph(0, {chain({}), chain({"a"})});
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.start_count(0), 1);
}

TEST(BuildGraph, PermutationInvariantAndStartSum) {
  Rng rng(5);
  std::vector<EventChain> chains;
  const std::vector<const char*> pool{"a", "b", "c", "d", "e"};
  for (int i = 0; i < 30; ++i) {
    EventChain c;
    const auto len = rng.below(5);
    for (std::uint64_t k = 0; k < len; ++k) c.events.push_back(parse_event(pool[rng.below(pool.size())]));
    chains.push_back(c);
  }
  const EventGraph g = build_graph(1, chains);
  auto shuffled = chains;
  rng.shuffle(shuffled);
  const EventGraph h = build_graph(1, shuffled);
  // ids may differ; compare through surfaces
  for (const Event& e : g.events()) {
    const EventId a = *g.find(e.surface()), b = *h.find(e.surface());
    EXPECT_EQ(g.start_count(a), h.start_count(b));
    for (const Edge& edge : g.out_edges(a)) {
      const auto target = *h.find(g.event(edge.target).surface());
      EXPECT_TRUE(h.has_edge(b, target));
    }
    EXPECT_EQ(g.out_edges(a).size(), h.out_edges(b).size());
  }
  std::int64_t starts = 0;
  for (auto s : g.start_counts()) starts += s;
  EXPECT_EQ(starts, std::count_if(chains.begin(), chains.end(), [](const EventChain& c) { return !c.events.empty(); }));
}

TEST(Successors, Examples) {
  const EventGraph g = build_graph(0, {chain({"buy", "wear", "break"})});
  EXPECT_EQ(succ_names(g, "buy"), (std::vector<std::string>{"wear"}));
  EXPECT_TRUE(succ_names(g, "break").empty());
  const EventGraph h = build_graph(0, {chain({"a", "b"}), chain({"a", "c"})});
  EXPECT_EQ(succ_names(h, "a"), (std::vector<std::string>{"b", "c"}));
  EXPECT_THROW(successors(h, 99), DataError);
}

TEST(Stats, EmptyStarAndChain) {
  const GraphStats empty = graph_stats(EventGraph(0));
  EXPECT_EQ(empty.nodes, 0u);
  EXPECT_EQ(empty.edges, 0u);
  EXPECT_EQ(empty.mean_out_degree, 0.0);
  EXPECT_EQ(empty.start_events, 0u);
  EXPECT_EQ(empty.exclusive_pairs, 0u);

  EventGraph star = build_graph(0, {chain({"a", "b"}), chain({"a", "c"}), chain({"a", "d"})});
  star.add_exclusive(*star.find("b"), *star.find("c"));
  const GraphStats s = graph_stats(star);
  EXPECT_EQ(s.nodes, 4u);
  EXPECT_EQ(s.edges, 3u);
  EXPECT_DOUBLE_EQ(s.mean_out_degree, 3.0);
  EXPECT_EQ(s.start_events, 1u);
  EXPECT_EQ(s.exclusive_pairs, 1u);
}

TEST(Exclusive, SymmetricAndValidated) {
  EventGraph g = build_graph(0, {chain({"a", "b", "c"})});
  g.add_exclusive(2, 0);
  EXPECT_TRUE(g.is_exclusive(0, 2));
  EXPECT_TRUE(g.is_exclusive(2, 0));
  EXPECT_FALSE(g.is_exclusive(0, 1));
  EXPECT_EQ(g.exclusive_pairs(), (std::set<std::pair<EventId, EventId>>{{0, 2}}));
  EXPECT_THROW(g.add_exclusive(1, 1), DataError);
  EXPECT_THROW(g.add_exclusive(1, 7), DataError);
  EXPECT_THROW(g.add_edge(0, 1, 0), DataError);
}

TEST(CountSequences, Examples) {
  const EventGraph single = build_graph(0, {chain({"a", "b"})});
  EXPECT_EQ(count_sequences(single, 2, 1000), 1u);
  EventGraph abc = build_graph(0, {chain({"a", "b", "c"})});
  EXPECT_EQ(count_sequences(abc, 3, 1000), 1u);
  abc.add_exclusive(*abc.find("a"), *abc.find("c"));
  EXPECT_EQ(count_sequences(abc, 3, 1000), 0u);
  EXPECT_THROW(count_sequences(abc, 0, 10), UsageError);
}

TEST(CountSequences, SaturatesAtLimit) {
  // complete graph with self loops on 4 nodes: 4 * 4^4 walks of length 5
  EventGraph g(0);
  for (int i = 0; i < 4; ++i) g.intern(Event{toy_event_name(static_cast<std::size_t>(i)), std::nullopt, false});
  for (EventId a = 0; a < 4; ++a) {
    g.add_start(a);
    for (EventId b = 0; b < 4; ++b) g.add_edge(a, b);
  }
  EXPECT_EQ(count_sequences(g, 5, 1u << 20), 1024u);
  EXPECT_EQ(count_sequences(g, 5, 100), 100u);
}

TEST(CountSequences, MatchesNaiveEnumeratorOnRandomGraphs) {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const EventGraph g = random_graph(rng, 4 + rng.below(7), 3, 0.15);
    for (int len = 1; len <= 4; ++len) {
      if (len == 4 && g.size() > 7) continue;  // keep the naive enumerator small
      EXPECT_EQ(count_sequences(g, len, UINT64_MAX), naive_count(g, len)) << "trial " << trial << " len " << len;
    }
  }
}

TEST(Serialization, RoundTrip) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    EventGraph g = random_graph(rng, 1 + rng.below(10), 3, 0.2, trial);
    g.intern(parse_event("(not)take(over)"));
    std::stringstream ss;
    write_graph(ss, g);
    const EventGraph back = read_graph(ss);
    EXPECT_TRUE(back == g);
    std::stringstream again;
    write_graph(again, back);
    std::stringstream first;
    write_graph(first, g);
    EXPECT_EQ(first.str(), again.str());
  }
}

TEST(Serialization, RejectsCorruptFiles) {
  std::istringstream bad_magic("graphplan-graf 1\n");
  EXPECT_THROW(read_graph(bad_magic), DataError);
  std::istringstream bad_edge(
      "graphplan-graph 1\ntopic 0\nevents 1\n0 1 a\nedges 1\n0 5 1\nexclusive 0\n");
  EXPECT_THROW(read_graph(bad_edge), DataError);
}

TEST(Manifest, SaveLoadAndMissingFile) {
  const auto dir = std::filesystem::temp_directory_path() / "graphplan_test_manifest";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const EventGraph g = build_graph(2, {chain({"a", "b"})});
  save_graph(dir / graph_file_name(2), g);
  save_manifest(dir, {{2, graph_file_name(2)}, {5, graph_file_name(5)}});
  const GraphManifest m = load_manifest(dir);
  EXPECT_EQ(m.at(2), "topic_2.graph");
  try {
    load_graphs(dir);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("topic_5.graph"), std::string::npos) << e.what();
  }
  std::filesystem::remove_all(dir);
}
