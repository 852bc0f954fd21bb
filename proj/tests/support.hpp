#pragma once

// Fixtures and independent oracles shared by the unit tests and the
// acceptance binary.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "graphplan/graphplan.hpp"

namespace graphplan::testing {

struct ToyArtifacts {
  EventGraph graph;
  CoherenceModel ee;
  CoherenceModel ie;
  std::vector<std::string> title;
};

inline std::string toy_event_name(std::size_t i) {
  std::string s = "ev";
  for (std::size_t x = i;; x /= 26) {
    s.push_back(static_cast<char>('a' + x % 26));
    if (x < 26) break;
  }
  return s;
}

// Random graph over `nodes` events: each node gets 0..max_out distinct
// successors (self loops allowed), one to three start events, and each
// unordered pair is exclusive with probability `p_exclusive`.
inline EventGraph random_graph(Rng& rng, std::size_t nodes, std::size_t max_out, double p_exclusive,
                               int topic = 0) {
  EventGraph g(topic);
  for (std::size_t i = 0; i < nodes; ++i) g.intern(Event{toy_event_name(i), std::nullopt, false});
  for (EventId a = 0; a < nodes; ++a) {
    const auto degree = rng.below(max_out + 1);
    std::vector<EventId> targets(nodes);
    for (EventId t = 0; t < nodes; ++t) targets[t] = t;
    rng.shuffle(targets);
    for (std::size_t k = 0; k < degree; ++k) g.add_edge(a, targets[k], 1 + static_cast<std::int64_t>(rng.below(3)));
  }
  const auto starts = 1 + rng.below(std::min<std::size_t>(3, nodes));
  for (std::size_t k = 0; k < starts; ++k) g.add_start(static_cast<EventId>(rng.below(nodes)), 1);
  for (EventId a = 0; a < nodes; ++a) {
    for (EventId b = a + 1; b < nodes; ++b) {
      if (rng.uniform() < p_exclusive) g.add_exclusive(a, b);
    }
  }
  return g;
}

// Tiny coherence models whose tables cover every graph event.
inline ToyArtifacts random_artifacts(Rng& rng, std::size_t nodes, std::size_t max_out, double p_exclusive) {
  ToyArtifacts t;
  t.graph = random_graph(rng, nodes, max_out, p_exclusive);
  std::vector<std::string> events;
  for (const Event& e : t.graph.events()) events.push_back(e.surface());
  t.title = {"red", "shoes"};
  const int dim = 2 + static_cast<int>(rng.below(3));
  const int hidden = 2 + static_cast<int>(rng.below(4));
  t.ee = init_coherence_model(CoherenceKind::kEventEvent, events, {},
                              CoherenceConfig{dim, hidden, 0.5, rng.next(), 1.0});
  t.ie = init_coherence_model(CoherenceKind::kInputEvent, events, {"red", "shoes", "blue"},
                              CoherenceConfig{dim, hidden, 0.5, rng.next(), 1.0});
  // Non-zero biases so the oracle also exercises them.
  t.ee.output_bias = rng.uniform(-1.0, 1.0);
  t.ie.output_bias = rng.uniform(-1.0, 1.0);
  for (Eigen::Index i = 0; i < t.ee.hidden_bias.size(); ++i) t.ee.hidden_bias(i) = rng.uniform(-0.5, 0.5);
  return t;
}

// Step score written straight from its definition: weights lambda^(t-1-i)
// normalized over the prefix, natural logs, scores from the model API.
inline double oracle_step(const ToyArtifacts& t, const std::vector<EventId>& prefix, EventId cand, double lambda) {
  double norm = 0.0;
  double acc = 0.0;
  const std::size_t n = prefix.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::pow(lambda, static_cast<double>(n - 1 - i));
    norm += w;
    acc += w * std::log(score_event_pair(t.ee, *t.ee.event_row(t.graph.event(prefix[i]).surface()),
                                         *t.ee.event_row(t.graph.event(cand).surface())));
  }
  const EventId ie_row = *t.ie.event_row(t.graph.event(cand).surface());
  return acc / norm + std::log(score_input_event(t.ie, t.title, ie_row));
}

struct OracleResult {
  std::vector<EventId> best;
  double best_total = 0.0;
  std::size_t feasible = 0;
};

// Exhaustive search over every length-`length` walk from a start event that
// follows edges and holds no exclusive pair. Ties go to the lexicographically
// smaller id sequence.
inline OracleResult brute_force_plan(const ToyArtifacts& t, int length, double lambda, bool no_repeat = false) {
  OracleResult r;
  std::vector<EventId> path;
  const EventGraph& g = t.graph;
  auto ok = [&](EventId next) {
    if (!g.has_edge(path.back(), next)) return false;
    for (EventId p : path) {
      if (g.is_exclusive(p, next)) return false;
      if (no_repeat && p == next) return false;
    }
    return true;
  };
  auto dfs = [&](auto&& self, double total) -> void {
    if (static_cast<int>(path.size()) == length) {
      ++r.feasible;
      if (r.best.empty() || total > r.best_total || (total == r.best_total && path < r.best)) {
        r.best = path;
        r.best_total = total;
      }
      return;
    }
    for (EventId next = 0; next < g.size(); ++next) {
      if (!ok(next)) continue;
      const double s = oracle_step(t, path, next, lambda);
      path.push_back(next);
      self(self, total + s);
      path.pop_back();
    }
  };
  for (EventId s = 0; s < g.size(); ++s) {
    if (g.start_count(s) <= 0) continue;
    path.assign(1, s);
    const double first = std::log(score_input_event(t.ie, t.title, *t.ie.event_row(g.event(s).surface())));
    dfs(dfs, first);
  }
  return r;
}

// Largest number of feasible partial walks at any depth up to `length`.
inline std::uint64_t max_frontier(const EventGraph& g, int length) {
  std::uint64_t m = 0;
  for (int k = 1; k <= length; ++k) m = std::max(m, count_sequences(g, k, UINT64_MAX));
  return m;
}

inline std::vector<EventId> ids_of(const EventGraph& g, const std::vector<std::string>& surfaces) {
  std::vector<EventId> out;
  for (const auto& s : surfaces) out.push_back(*g.find(s));
  return out;
}

// Documents drawn from `topics` disjoint vocabularies ("t<k>w<i>"), each
// document from a single planted topic.
struct PlantedCorpus {
  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> ids;
  std::vector<int> labels;
};

inline std::string planted_word(int topic, std::size_t i) {
  return "t" + std::to_string(topic) + "w" + std::to_string(i);
}

inline PlantedCorpus planted_corpus(Rng& rng, int topics, int docs_per_topic, std::size_t vocab_per_topic,
                                    std::size_t doc_len) {
  PlantedCorpus c;
  for (int k = 0; k < topics; ++k) {
    for (int d = 0; d < docs_per_topic; ++d) {
      std::vector<std::string> doc;
      for (std::size_t i = 0; i < doc_len; ++i) doc.push_back(planted_word(k, rng.below(vocab_per_topic)));
      c.docs.push_back(std::move(doc));
      c.labels.push_back(k);
    }
  }
  // interleave so document order carries no label information
  std::vector<std::size_t> order(c.docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  PlantedCorpus shuffled;
  for (std::size_t i : order) {
    shuffled.docs.push_back(c.docs[i]);
    shuffled.labels.push_back(c.labels[i]);
    shuffled.ids.push_back("doc" + std::to_string(shuffled.ids.size()));
  }
  return shuffled;
}

// Purity of hard assignments against planted labels: each predicted cluster
// votes for its majority label.
inline double purity(const std::vector<int>& predicted, const std::vector<int>& labels) {
  std::map<int, std::map<int, int>> table;
  for (std::size_t i = 0; i < predicted.size(); ++i) ++table[predicted[i]][labels[i]];
  int hit = 0;
  for (const auto& [cluster, counts] : table) {
    int best = 0;
    for (const auto& [label, n] : counts) best = std::max(best, n);
    hit += best;
  }
  return predicted.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(predicted.size());
}

// Argmax of the raw doc-topic counts, lowest index on ties.
inline std::vector<int> hard_topics(const TopicModel& m) {
  std::vector<int> out;
  for (std::size_t d = 0; d < m.num_docs(); ++d) {
    int best = 0;
    for (int k = 1; k < m.num_topics(); ++k) {
      if (m.doc_topic(d, k) > m.doc_topic(d, best)) best = k;
    }
    out.push_back(best);
  }
  return out;
}

// Majority planted label of each fitted topic.
inline std::vector<int> topic_labels(const TopicModel& m, const std::vector<int>& labels) {
  const auto hard = hard_topics(m);
  std::vector<std::map<int, int>> votes(static_cast<std::size_t>(m.num_topics()));
  for (std::size_t d = 0; d < hard.size(); ++d) ++votes[static_cast<std::size_t>(hard[d])][labels[d]];
  std::vector<int> out;
  for (const auto& v : votes) {
    int best = -1;
    int n = 0;
    for (const auto& [label, c] : v) {
      if (c > n) {
        best = label;
        n = c;
      }
    }
    out.push_back(best);
  }
  return out;
}


// Visits every scalar parameter of a model together with its analytic
// gradient entry (zero when the row was not touched).
template <typename Visit>
void for_each_parameter(CoherenceModel& m, const Gradients& g, Visit&& visit) {
  auto rows = [&](Eigen::MatrixXd& table, const std::map<std::size_t, Eigen::VectorXd>& grad_rows) {
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
      auto it = grad_rows.find(static_cast<std::size_t>(r));
      for (Eigen::Index c = 0; c < table.cols(); ++c) visit(table(r, c), it == grad_rows.end() ? 0.0 : it->second(c));
    }
  };
  rows(m.event_embeddings, g.event_rows);
  rows(m.word_embeddings, g.word_rows);
  for (Eigen::Index r = 0; r < m.hidden_weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.hidden_weights.cols(); ++c) visit(m.hidden_weights(r, c), g.hidden_weights(r, c));
  }
  for (Eigen::Index i = 0; i < m.hidden_bias.size(); ++i) visit(m.hidden_bias(i), g.hidden_bias(i));
  for (Eigen::Index i = 0; i < m.output_weights.size(); ++i) visit(m.output_weights(i), g.output_weights(i));
  visit(m.output_bias, g.output_bias);
}

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t parameters = 0;
};

// Central differences (step eps) of the summed hinge loss over `pairs`
// against the analytic gradient. The margin is set high enough that every
// hinge stays active, so the loss is smooth around the evaluation point.
inline GradientCheck check_gradients(CoherenceModel m, const std::vector<TrainingPair>& pairs, double eps = 1e-5) {
  m.margin = 2.5;
  auto loss = [&](const CoherenceModel& model) {
    double total = 0.0;
    for (const auto& p : pairs) total += pair_loss(model, p);
    return total;
  };
  Gradients g(m);
  for (const auto& p : pairs) pair_loss(m, p, &g);
  GradientCheck out;
  CoherenceModel probe = m;
  for_each_parameter(probe, g, [&](double& x, double analytic) {
    const double saved = x;
    x = saved + eps;
    const double up = loss(probe);
    x = saved - eps;
    const double down = loss(probe);
    x = saved;
    const double numeric = (up - down) / (2.0 * eps);
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-4});
    out.max_relative_error = std::max(out.max_relative_error, std::abs(analytic - numeric) / scale);
    ++out.parameters;
  });
  return out;
}

// A random tiny model of either kind with a few random training pairs.
inline std::pair<CoherenceModel, std::vector<TrainingPair>> random_gradient_case(Rng& rng, CoherenceKind kind) {
  const std::size_t n_events = 3 + rng.below(4);
  std::vector<std::string> events;
  for (std::size_t i = 0; i < n_events; ++i) events.push_back(toy_event_name(i));
  const std::vector<std::string> words{"red", "shoes", "day", "party"};
  const int dim = 2 + static_cast<int>(rng.below(3));
  const int hidden = 2 + static_cast<int>(rng.below(4));
  CoherenceModel m = init_coherence_model(kind, events, words, CoherenceConfig{dim, hidden, 0.5, rng.next(), 1.0});
  for (Eigen::Index i = 0; i < m.hidden_bias.size(); ++i) m.hidden_bias(i) = rng.uniform(-0.5, 0.5);
  m.output_bias = rng.uniform(-0.5, 0.5);
  std::vector<TrainingPair> pairs;
  for (int k = 0; k < 3; ++k) {
    TrainingPair p;
    if (kind == CoherenceKind::kEventEvent) {
      p.anchor = static_cast<EventId>(rng.below(n_events));
    } else {
      p.anchor = std::vector<std::string>{words[rng.below(4)], words[rng.below(4)], "unknown"};
    }
    p.positive = static_cast<EventId>(rng.below(n_events));
    do {
      p.negative = static_cast<EventId>(rng.below(n_events));
    } while (p.negative == p.positive);
    pairs.push_back(std::move(p));
  }
  return {std::move(m), std::move(pairs)};
}

}  // namespace graphplan::testing
