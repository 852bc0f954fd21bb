#pragma once

// Per-topic event graphs.
//
// Text format (one graph per file):
//   graphplan-graph 1
//   topic <id>
//   events <N>
//   <id> <start_count> <surface>          N lines, ids 0..N-1 in order
//   edges <M>
//   <src> <dst> <count>                   M lines, sorted by (src, dst)
//   exclusive <P>
//   <a> <b>                               P lines, a < b, sorted
//
// Manifest (manifest.txt in the graph directory):
//   graphplan-manifest 1
//   <topic_id> <file name relative to the directory>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphplan/corpus.hpp"
#include "graphplan/error.hpp"
#include "graphplan/event.hpp"

namespace graphplan {

using EventId = std::uint32_t;

struct Edge {
  EventId target;
  std::int64_t count;
  friend bool operator==(const Edge&, const Edge&) = default;
};

class EventGraph {
 public:
  EventGraph() = default;
  explicit EventGraph(int topic_id) : topic_id_(topic_id) {}

  int topic_id() const { return topic_id_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  const Event& event(EventId id) const {
    check(id);
    return events_[id];
  }
  const std::vector<Event>& events() const { return events_; }

  std::optional<EventId> find(const std::string& surface) const {
    auto it = index_.find(surface);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  EventId intern(const Event& e) {
    const std::string s = e.surface();
    if (auto it = index_.find(s); it != index_.end()) return it->second;
    const auto id = static_cast<EventId>(events_.size());
    events_.push_back(e);
    index_.emplace(s, id);
    adjacency_.emplace_back();
    start_counts_.push_back(0);
    exclusive_with_.emplace_back();
    return id;
  }

  // Adds `count` to the edge src -> dst; adjacency lists stay sorted by target.
  void add_edge(EventId src, EventId dst, std::int64_t count = 1) {
    check(src);
    check(dst);
    if (count < 1) throw DataError("edge count must be positive");
    auto& list = adjacency_[src];
    auto it = std::lower_bound(list.begin(), list.end(), dst,
                               [](const Edge& e, EventId t) { return e.target < t; });
    if (it != list.end() && it->target == dst) {
      it->count += count;
    } else {
      list.insert(it, Edge{dst, count});
    }
  }

  void add_start(EventId id, std::int64_t count = 1) {
    check(id);
    start_counts_[id] += count;
  }

  const std::vector<Edge>& out_edges(EventId id) const {
    check(id);
    return adjacency_[id];
  }

  bool has_edge(EventId src, EventId dst) const {
    const auto& list = out_edges(src);
    auto it = std::lower_bound(list.begin(), list.end(), dst,
                               [](const Edge& e, EventId t) { return e.target < t; });
    return it != list.end() && it->target == dst;
  }

  std::int64_t start_count(EventId id) const {
    check(id);
    return start_counts_[id];
  }
  const std::vector<std::int64_t>& start_counts() const { return start_counts_; }

  void add_exclusive(EventId a, EventId b) {
    check(a);
    check(b);
    if (a == b) throw DataError("an event cannot be exclusive with itself");
    if (a > b) std::swap(a, b);
    if (!exclusive_.emplace(a, b).second) return;
    auto insert_sorted = [](std::vector<EventId>& v, EventId x) {
      v.insert(std::lower_bound(v.begin(), v.end(), x), x);
    };
    insert_sorted(exclusive_with_[a], b);
    insert_sorted(exclusive_with_[b], a);
  }

  void clear_exclusive() {
    exclusive_.clear();
    for (auto& v : exclusive_with_) v.clear();
  }

  bool is_exclusive(EventId a, EventId b) const {
    check(a);
    const auto& v = exclusive_with_[a];
    return std::binary_search(v.begin(), v.end(), b);
  }

  const std::set<std::pair<EventId, EventId>>& exclusive_pairs() const { return exclusive_; }
  const std::vector<EventId>& exclusive_with(EventId id) const {
    check(id);
    return exclusive_with_[id];
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& l : adjacency_) n += l.size();
    return n;
  }

  friend bool operator==(const EventGraph& a, const EventGraph& b) {
    return a.topic_id_ == b.topic_id_ && a.events_ == b.events_ && a.adjacency_ == b.adjacency_ &&
           a.start_counts_ == b.start_counts_ && a.exclusive_ == b.exclusive_;
  }

 private:
  void check(EventId id) const {
    if (id >= events_.size()) {
      throw DataError("event id " + std::to_string(id) + " out of range for graph of topic " +
                      std::to_string(topic_id_));
    }
  }

  int topic_id_ = 0;
  std::vector<Event> events_;
  std::unordered_map<std::string, EventId> index_;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<std::int64_t> start_counts_;
  std::set<std::pair<EventId, EventId>> exclusive_;
  std::vector<std::vector<EventId>> exclusive_with_;
};

// Nodes are the union of chain events; consecutive events in a chain get an
// edge (across sentence boundaries); the first event of each non-empty chain
// counts as a start.
inline EventGraph build_graph(int topic_id, const std::vector<EventChain>& chains) {
  EventGraph g(topic_id);
  for (const EventChain& chain : chains) {
    if (chain.events.empty()) continue;
    EventId prev = g.intern(chain.events.front());
    g.add_start(prev);
    for (std::size_t i = 1; i < chain.events.size(); ++i) {
      const EventId cur = g.intern(chain.events[i]);
      g.add_edge(prev, cur);
      prev = cur;
    }
  }
  return g;
}

inline std::vector<EventId> successors(const EventGraph& g, EventId e) {
  std::vector<EventId> out;
  for (const Edge& edge : g.out_edges(e)) out.push_back(edge.target);
  return out;
}

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double mean_out_degree = 0.0;  // over nodes with at least one out-edge
  std::size_t start_events = 0;
  std::size_t exclusive_pairs = 0;
};

inline GraphStats graph_stats(const EventGraph& g) {
  GraphStats s;
  s.nodes = g.size();
  std::size_t non_sink = 0;
  for (EventId id = 0; id < g.size(); ++id) {
    const std::size_t deg = g.out_edges(id).size();
    s.edges += deg;
    if (deg > 0) ++non_sink;
    if (g.start_count(id) > 0) ++s.start_events;
  }
  s.mean_out_degree = non_sink ? static_cast<double>(s.edges) / static_cast<double>(non_sink) : 0.0;
  s.exclusive_pairs = g.exclusive_pairs().size();
  return s;
}

// Number of length-`length` walks that begin at a start event, follow edges
// and never hold an exclusive pair. Stops counting at `limit`.
inline std::uint64_t count_sequences(const EventGraph& g, int length, std::uint64_t limit) {
  if (length < 1) throw UsageError("count_sequences: length must be >= 1");
  if (limit < 1) throw UsageError("count_sequences: limit must be >= 1");
  std::uint64_t count = 0;
  std::vector<EventId> path;
  path.reserve(static_cast<std::size_t>(length));

  auto compatible = [&](EventId next) {
    for (EventId p : path) {
      if (g.is_exclusive(p, next)) return false;
    }
    return true;
  };
  // Returns false once the limit is reached.
  auto dfs = [&](auto&& self) -> bool {
    if (static_cast<int>(path.size()) == length) return ++count < limit;
    for (const Edge& e : g.out_edges(path.back())) {
      if (!compatible(e.target)) continue;
      path.push_back(e.target);
      const bool go_on = self(self);
      path.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  for (EventId s = 0; s < g.size(); ++s) {
    if (g.start_count(s) <= 0) continue;
    path.assign(1, s);
    if (!dfs(dfs)) break;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Serialization

inline void write_graph(std::ostream& out, const EventGraph& g) {
  out << "graphplan-graph 1\n";
  out << "topic " << g.topic_id() << '\n';
  out << "events " << g.size() << '\n';
  for (EventId id = 0; id < g.size(); ++id) {
    out << id << ' ' << g.start_count(id) << ' ' << g.event(id).surface() << '\n';
  }
  out << "edges " << g.edge_count() << '\n';
  for (EventId id = 0; id < g.size(); ++id) {
    for (const Edge& e : g.out_edges(id)) out << id << ' ' << e.target << ' ' << e.count << '\n';
  }
  out << "exclusive " << g.exclusive_pairs().size() << '\n';
  for (const auto& [a, b] : g.exclusive_pairs()) out << a << ' ' << b << '\n';
}

inline EventGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) throw DataError("graph file truncated after line " + std::to_string(line_no));
    ++line_no;
    return std::istringstream(line);
  };
  auto fail = [&](const std::string& what) {
    throw DataError("graph file line " + std::to_string(line_no) + ": " + what);
  };
  auto expect_section = [&](const std::string& key) -> long long {
    auto ss = next_line();
    std::string k;
    long long n = -1;
    if (!(ss >> k >> n) || k != key || n < 0) fail("expected '" + key + " <n>'");
    return n;
  };

  {
    auto ss = next_line();
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != "graphplan-graph") fail("not a graph file");
    if (version != 1) fail("unsupported graph version " + std::to_string(version));
  }
  {
    auto ss = next_line();
    std::string k;
    int topic = 0;
    if (!(ss >> k >> topic) || k != "topic") fail("expected 'topic <id>'");
    EventGraph g(topic);
    const long long n_events = expect_section("events");
    for (long long i = 0; i < n_events; ++i) {
      auto es = next_line();
      long long id = -1;
      std::int64_t starts = 0;
      std::string surface;
      if (!(es >> id >> starts >> surface) || id != i || starts < 0) fail("bad event line");
      if (g.intern(parse_event(surface)) != static_cast<EventId>(i)) fail("duplicate event " + surface);
      if (starts > 0) g.add_start(static_cast<EventId>(i), starts);
    }
    const long long n_edges = expect_section("edges");
    for (long long i = 0; i < n_edges; ++i) {
      auto es = next_line();
      long long a = -1, b = -1;
      std::int64_t c = 0;
      if (!(es >> a >> b >> c) || a < 0 || b < 0 || a >= n_events || b >= n_events || c < 1) {
        fail("bad edge line");
      }
      if (g.has_edge(static_cast<EventId>(a), static_cast<EventId>(b))) fail("duplicate edge");
      g.add_edge(static_cast<EventId>(a), static_cast<EventId>(b), c);
    }
    const long long n_excl = expect_section("exclusive");
    for (long long i = 0; i < n_excl; ++i) {
      auto es = next_line();
      long long a = -1, b = -1;
      if (!(es >> a >> b) || a < 0 || b < 0 || a >= n_events || b >= n_events || a == b) {
        fail("bad exclusive pair");
      }
      g.add_exclusive(static_cast<EventId>(a), static_cast<EventId>(b));
    }
    return g;
  }
}

inline void save_graph(const std::filesystem::path& path, const EventGraph& g) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write graph file '" + path.string() + "'");
  write_graph(out, g);
}

inline EventGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file '" + path.string() + "'");
  try {
    return read_graph(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

// topic id -> graph file name, relative to the graph directory.
using GraphManifest = std::map<int, std::string>;

inline std::string graph_file_name(int topic_id) { return "topic_" + std::to_string(topic_id) + ".graph"; }

inline void save_manifest(const std::filesystem::path& dir, const GraphManifest& m) {
  std::ofstream out(dir / "manifest.txt");
  if (!out) throw DataError("cannot write manifest in '" + dir.string() + "'");
  out << "graphplan-manifest 1\n";
  for (const auto& [topic, file] : m) out << topic << ' ' << file << '\n';
}

inline GraphManifest load_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.txt";
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph manifest '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "graphplan-manifest 1") {
    throw DataError("'" + path.string() + "' is not a graph manifest");
  }
  GraphManifest m;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::istringstream ss(line);
    int topic = 0;
    std::string file;
    if (!(ss >> topic >> file)) throw DataError("bad manifest line '" + line + "'");
    m[topic] = file;
  }
  return m;
}

// All graphs named by the manifest, in topic order.
inline std::vector<EventGraph> load_graphs(const std::filesystem::path& dir) {
  std::vector<EventGraph> graphs;
  for (const auto& [topic, file] : load_manifest(dir)) graphs.push_back(load_graph(dir / file));
  return graphs;
}

}  // namespace graphplan
