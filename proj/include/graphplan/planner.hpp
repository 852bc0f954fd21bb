#pragma once

// Storyline planning over an event graph: score-guided beam search and the
// random-walk baseline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphplan/coherence.hpp"
#include "graphplan/error.hpp"
#include "graphplan/graph.hpp"
#include "graphplan/random.hpp"
#include "graphplan/topics.hpp"

namespace graphplan {

enum class StartMode { kSample, kRankByInput };

struct PlanConfig {
  int length = 5;
  int beam = 10;
  int n_starts = 0;  // 0 means "same as beam"
  double lambda = 0.5;
  std::uint64_t seed = 1;
  bool no_repeat = false;
  // Weight prefix event i by lambda^i (first event heaviest) instead of
  // lambda^(distance from the candidate).
  bool literal_decay = false;
  StartMode start_mode = StartMode::kSample;
  std::vector<std::string> prefix;  // pinned leading event surfaces
  int walk_restarts = 10;

  int resolved_starts() const { return n_starts > 0 ? n_starts : beam; }

  void validate() const {
    if (length < 1) throw UsageError("length must be >= 1");
    if (beam < 1) throw UsageError("beam must be >= 1");
    if (n_starts < 0) throw UsageError("n_starts must be >= 0");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw UsageError("lambda must be in (0, 1]");
    if (walk_restarts < 1) throw UsageError("walk_restarts must be >= 1");
    if (static_cast<int>(prefix.size()) > length) throw UsageError("prefix is longer than the plan length");
  }
};

struct Plan {
  std::string method = "beam";
  std::vector<std::string> input;  // title tokens
  int topic_id = 0;
  std::vector<std::string> events;
  std::vector<double> step_scores;
  double total_score = 0.0;
  bool early_termination = false;
  PlanConfig config;
};

struct BeamCandidate {
  std::vector<EventId> events;
  std::vector<double> step_scores;
  double total = 0.0;
};

// Normalized decay weights for a prefix of `n` events, indexed by prefix
// position. Default: the most recent event weighs lambda^0 and the first
// lambda^(n-1). Literal: position i weighs lambda^i.
inline std::vector<double> decay_weights(std::size_t n, double lambda, bool literal = false) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exponent = literal ? static_cast<double>(i) : static_cast<double>(n - 1 - i);
    w[i] = std::pow(lambda, exponent);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

// Score(e_t) from raw coherence values: the decayed average of
// ln f_event(e_i, e_t) over the prefix plus ln f_input(x, e_t).
inline double combine_step_score(const std::vector<double>& event_scores, double input_score, double lambda,
                                 bool literal = false) {
  if (event_scores.empty()) throw UsageError("step_score: prefix must be non-empty");
  if (!(input_score > 0.0)) throw ModelError("step_score: input coherence must be > 0");
  const std::vector<double> w = decay_weights(event_scores.size(), lambda, literal);
  double acc = 0.0;
  for (std::size_t i = 0; i < event_scores.size(); ++i) {
    if (!(event_scores[i] > 0.0)) throw ModelError("step_score: event coherence must be > 0");
    acc += w[i] * std::log(event_scores[i]);
  }
  return acc + std::log(input_score);
}

// Model-level Score(e_t). `prefix` and `cand` are rows of the event-event
// model; the input model is looked up by the candidate's surface.
inline double step_score(const CoherenceModel& ee, const CoherenceModel& ie, const std::vector<std::string>& title,
                         const std::vector<EventId>& prefix, EventId cand, double lambda, bool literal = false) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw UsageError("step_score: lambda must be in (0, 1]");
  std::vector<double> f;
  f.reserve(prefix.size());
  for (EventId p : prefix) f.push_back(score_event_pair(ee, p, cand));
  if (cand >= ee.events.size()) throw DataError("unknown event id " + std::to_string(cand));
  auto ie_row = ie.event_row(ee.events[cand]);
  if (!ie_row) throw DataError("input model has no event '" + ee.events[cand] + "'");
  return combine_step_score(f, score_input_event(ie, title, *ie_row), lambda, literal);
}

// Extension candidates: successors of the last prefix event that are
// not exclusive with any prefix event. Sorted by id.
inline std::vector<EventId> candidates(const EventGraph& g, const std::vector<EventId>& prefix) {
  if (prefix.empty()) throw UsageError("candidates: prefix must be non-empty");
  std::vector<EventId> out;
  for (const Edge& e : g.out_edges(prefix.back())) {
    bool ok = true;
    for (EventId p : prefix) {
      if (g.is_exclusive(p, e.target)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(e.target);
  }
  return out;
}

// True when consecutive events are edges and no two events are exclusive.
inline bool is_valid_walk(const EventGraph& g, const std::vector<EventId>& walk) {
  for (std::size_t i = 0; i < walk.size(); ++i) {
    if (walk[i] >= g.size()) return false;
    if (i > 0 && !g.has_edge(walk[i - 1], walk[i])) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (walk[i] != walk[j] && g.is_exclusive(walk[j], walk[i])) return false;
    }
  }
  return true;
}

// Scores of every graph event against one title, plus the event-event
// scorer restricted to the graph. Built once per plan.
class PlanScorer {
 public:
  PlanScorer(const EventGraph& g, const CoherenceModel& ee, const CoherenceModel& ie,
             const std::vector<std::string>& title)
      : pair_(ee, model_rows_for(ee, g)) {
    const auto ie_rows = model_rows_for(ie, g);
    log_input_.reserve(g.size());
    for (EventId row : ie_rows) log_input_.push_back(std::log(score_input_event(ie, title, row)));
  }

  double log_input(EventId e) const { return log_input_[e]; }

  double step(const std::vector<EventId>& prefix, EventId cand, double lambda, bool literal) const {
    const std::vector<double> w = decay_weights(prefix.size(), lambda, literal);
    double acc = 0.0;
    for (std::size_t i = 0; i < prefix.size(); ++i) acc += w[i] * std::log(pair_(prefix[i], cand));
    return acc + log_input_[cand];
  }

 private:
  EventPairScorer pair_;
  std::vector<double> log_input_;
};

namespace planner_detail {

// Higher total first; equal totals by lexicographic event-id sequence.
inline bool beam_order(const BeamCandidate& a, const BeamCandidate& b) {
  if (a.total != b.total) return a.total > b.total;
  return a.events < b.events;
}

inline std::vector<EventId> resolve_prefix(const EventGraph& g, const std::vector<std::string>& prefix) {
  std::vector<EventId> ids;
  for (const std::string& s : prefix) {
    auto id = g.find(s);
    if (!id) throw UsageError("prefix event '" + s + "' is not in the graph of topic " + std::to_string(g.topic_id()));
    ids.push_back(*id);
  }
  if (!is_valid_walk(g, ids)) throw UsageError("prefix is not a valid walk in the graph");
  return ids;
}

// Start events: those that open a training story, or every event when the
// graph has no start counts.
inline std::vector<double> start_weights(const EventGraph& g) {
  std::vector<double> w(g.size(), 0.0);
  bool any = false;
  for (EventId i = 0; i < g.size(); ++i) {
    w[i] = static_cast<double>(g.start_count(i));
    any = any || w[i] > 0.0;
  }
  if (!any) std::fill(w.begin(), w.end(), 1.0);
  return w;
}

// Up to n distinct starts drawn without replacement, proportional to weight.
inline std::vector<EventId> sample_starts(std::vector<double> w, std::size_t n, Rng& rng) {
  std::vector<EventId> out;
  while (out.size() < n) {
    const std::size_t i = rng.weighted(std::span<const double>(w));
    if (i >= w.size()) break;
    out.push_back(static_cast<EventId>(i));
    w[i] = 0.0;
  }
  return out;
}

inline Plan make_plan(const EventGraph& g, const std::vector<std::string>& title, const PlanConfig& cfg,
                      const std::string& method) {
  Plan p;
  p.method = method;
  p.input = title;
  p.topic_id = g.topic_id();
  p.config = cfg;
  return p;
}

}  // namespace planner_detail

// The start set a beam search would seed with (before scoring).
inline std::vector<EventId> choose_starts(const EventGraph& g, const PlanScorer& scorer, const PlanConfig& cfg) {
  using namespace planner_detail;
  const std::vector<double> w = start_weights(g);
  const auto n = static_cast<std::size_t>(cfg.resolved_starts());
  if (cfg.start_mode == StartMode::kRankByInput) {
    std::vector<EventId> pool;
    for (EventId i = 0; i < g.size(); ++i) {
      if (w[i] > 0.0) pool.push_back(i);
    }
    std::stable_sort(pool.begin(), pool.end(),
                     [&](EventId a, EventId b) { return scorer.log_input(a) > scorer.log_input(b); });
    if (pool.size() > n) pool.resize(n);
    return pool;
  }
  Rng rng(cfg.seed);
  return sample_starts(w, n, rng);
}

// Score-guided beam search. Seeds carry ln f_input(x, e_1) as their first
// step score; each extension adds Score(e_t); the beam keeps the best `beam`
// candidates by running total. When every candidate dies before `length`,
// the best candidate of the last live step is returned with
// early_termination set.
inline Plan plan_beam(const EventGraph& g, const CoherenceModel& ee, const CoherenceModel& ie,
                      const std::vector<std::string>& title, const PlanConfig& cfg) {
  using namespace planner_detail;
  cfg.validate();
  if (g.empty()) throw DataError("cannot plan on the empty graph of topic " + std::to_string(g.topic_id()));
  const PlanScorer scorer(g, ee, ie, title);

  std::vector<BeamCandidate> live;
  if (!cfg.prefix.empty()) {
    BeamCandidate c;
    for (EventId id : resolve_prefix(g, cfg.prefix)) {
      const double s = c.events.empty() ? scorer.log_input(id) : scorer.step(c.events, id, cfg.lambda, cfg.literal_decay);
      c.events.push_back(id);
      c.step_scores.push_back(s);
      c.total += s;
    }
    live.push_back(std::move(c));
  } else {
    for (EventId s : choose_starts(g, scorer, cfg)) {
      const double score = scorer.log_input(s);
      live.push_back(BeamCandidate{{s}, {score}, score});
    }
  }
  std::sort(live.begin(), live.end(), beam_order);

  bool early = false;
  while (!live.empty() && static_cast<int>(live.front().events.size()) < cfg.length) {
    std::vector<BeamCandidate> next;
    for (const BeamCandidate& c : live) {
      for (EventId cand : candidates(g, c.events)) {
        if (cfg.no_repeat && std::find(c.events.begin(), c.events.end(), cand) != c.events.end()) continue;
        const double s = scorer.step(c.events, cand, cfg.lambda, cfg.literal_decay);
        BeamCandidate n = c;
        n.events.push_back(cand);
        n.step_scores.push_back(s);
        n.total += s;
        next.push_back(std::move(n));
      }
    }
    if (next.empty()) {
      early = true;
      break;
    }
    std::sort(next.begin(), next.end(), beam_order);
    if (next.size() > static_cast<std::size_t>(cfg.beam)) next.resize(static_cast<std::size_t>(cfg.beam));
    live = std::move(next);
  }

  Plan plan = make_plan(g, title, cfg, "beam");
  if (live.empty()) {
    plan.early_termination = true;
    return plan;
  }
  const BeamCandidate& best = live.front();
  for (EventId id : best.events) plan.events.push_back(g.event(id).surface());
  plan.step_scores = best.step_scores;
  plan.total_score = best.total;
  plan.early_termination = early;
  return plan;
}

// Random-walk baseline: start drawn by start frequency, each step uniform
// over the exclusivity-filtered successors. A dead end restarts the walk; after
// `walk_restarts` attempts the longest walk seen is returned, flagged.
inline Plan random_walk(const EventGraph& g, const std::vector<std::string>& title, const PlanConfig& cfg) {
  using namespace planner_detail;
  cfg.validate();
  Plan plan = make_plan(g, title, cfg, "walk");
  if (g.empty()) {
    plan.early_termination = true;
    return plan;
  }
  Rng rng(cfg.seed);
  const std::vector<double> w = start_weights(g);
  std::vector<EventId> best;
  for (int attempt = 0; attempt < cfg.walk_restarts; ++attempt) {
    std::vector<EventId> walk;
    if (!cfg.prefix.empty()) {
      walk = resolve_prefix(g, cfg.prefix);
    } else {
      walk.push_back(static_cast<EventId>(rng.weighted(std::span<const double>(w))));
    }
    while (static_cast<int>(walk.size()) < cfg.length) {
      std::vector<EventId> options = candidates(g, walk);
      if (cfg.no_repeat) {
        std::erase_if(options, [&](EventId e) { return std::find(walk.begin(), walk.end(), e) != walk.end(); });
      }
      if (options.empty()) break;
      walk.push_back(options[rng.below(options.size())]);
    }
    if (walk.size() > best.size()) best = walk;
    if (static_cast<int>(best.size()) == cfg.length) break;
  }
  for (EventId id : best) plan.events.push_back(g.event(id).surface());
  plan.early_termination = static_cast<int>(best.size()) < cfg.length;
  return plan;
}

// ---------------------------------------------------------------------------
// Graph selection

struct SelectOptions {
  InferOptions infer;
  // Walk down the topic ranking past topics whose graph is missing from the
  // manifest or empty, instead of failing on the argmax topic.
  bool skip_empty = false;
};

// Loads the graph of the most probable topic for a title.
inline EventGraph select_graph(const TopicModel& lda, const std::filesystem::path& graph_dir,
                               const GraphManifest& manifest, const std::vector<std::string>& title,
                               const SelectOptions& options = {}) {
  const std::vector<double> theta = infer_topic(lda, title, options.infer);
  std::vector<int> order(theta.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return theta[a] > theta[b]; });
  for (int k : order) {
    auto it = manifest.find(k);
    if (it == manifest.end()) {
      if (options.skip_empty) continue;
      throw DataError("no graph for topic " + std::to_string(k) + " in manifest of '" + graph_dir.string() + "'");
    }
    EventGraph g = load_graph(graph_dir / it->second);
    if (g.empty() && options.skip_empty) continue;
    return g;
  }
  throw DataError("no non-empty graph in '" + graph_dir.string() + "'");
}

// ---------------------------------------------------------------------------
// Plan records (one JSON object per line)

inline nlohmann::json plan_to_json(const Plan& p) {
  const PlanConfig& c = p.config;
  return nlohmann::json{
      {"method", p.method},
      {"title", p.input},
      {"topic", p.topic_id},
      {"events", p.events},
      {"step_scores", p.step_scores},
      {"total", p.total_score},
      {"early_termination", p.early_termination},
      {"seed", c.seed},
      {"config",
       {{"length", c.length},
        {"beam", c.beam},
        {"n_starts", c.resolved_starts()},
        {"lambda", c.lambda},
        {"no_repeat", c.no_repeat},
        {"literal_decay", c.literal_decay},
        {"start_mode", c.start_mode == StartMode::kSample ? "sample" : "rank"},
        {"prefix", c.prefix}}},
  };
}

inline Plan plan_from_json(const nlohmann::json& j) {
  Plan p;
  p.method = j.value("method", "beam");
  p.input = j.at("title").get<std::vector<std::string>>();
  p.topic_id = j.value("topic", 0);
  p.events = j.at("events").get<std::vector<std::string>>();
  if (j.contains("step_scores")) p.step_scores = j["step_scores"].get<std::vector<double>>();
  p.total_score = j.value("total", 0.0);
  p.early_termination = j.value("early_termination", false);
  p.config.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("config")) {
    const auto& c = j["config"];
    p.config.length = c.value("length", p.config.length);
    p.config.beam = c.value("beam", p.config.beam);
    p.config.n_starts = c.value("n_starts", 0);
    p.config.lambda = c.value("lambda", p.config.lambda);
    p.config.no_repeat = c.value("no_repeat", false);
    p.config.literal_decay = c.value("literal_decay", false);
    p.config.start_mode = c.value("start_mode", std::string("sample")) == "rank" ? StartMode::kRankByInput
                                                                                 : StartMode::kSample;
    if (c.contains("prefix")) p.config.prefix = c["prefix"].get<std::vector<std::string>>();
  }
  return p;
}

inline void write_plans(std::ostream& out, const std::vector<Plan>& plans) {
  for (const Plan& p : plans) out << plan_to_json(p).dump() << '\n';
}

inline std::vector<Plan> read_plans(std::istream& in) {
  std::vector<Plan> plans;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      plans.push_back(plan_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("plans line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return plans;
}

inline std::vector<Plan> read_plans(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open plans file '" + path + "'");
  return read_plans(in);
}

}  // namespace graphplan
