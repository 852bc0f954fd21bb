#pragma once

// Event-event and input-event coherence scorers.
//
// Both share one shape: an anchor vector a (an event embedding, or the mean
// of the known title-word embeddings) and a candidate event embedding e are
// concatenated and scored as
//
//   f(a, e) = sigmoid(w2 . tanh(W1 [a; e] + b1) + b2)
//
// and trained with the margin loss max(0, m - f(a, e+) + f(a, e-)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "graphplan/corpus.hpp"
#include "graphplan/error.hpp"
#include "graphplan/graph.hpp"
#include "graphplan/random.hpp"

namespace graphplan {

enum class CoherenceKind { kEventEvent, kInputEvent };

inline std::string_view kind_name(CoherenceKind k) {
  return k == CoherenceKind::kEventEvent ? "event_event" : "input_event";
}

// Parameters are public: the trainer, the finite-difference checks and the
// hand-built models in tests all poke at them directly.
struct CoherenceModel {
  CoherenceKind kind = CoherenceKind::kEventEvent;
  double margin = 0.5;
  std::uint64_t seed = 0;

  std::vector<std::string> events;  // row -> surface
  std::vector<std::string> words;   // row -> word (input_event only)

  Eigen::MatrixXd event_embeddings;  // E x d
  Eigen::MatrixXd word_embeddings;   // V x d
  Eigen::MatrixXd hidden_weights;    // h x 2d
  Eigen::VectorXd hidden_bias;       // h
  Eigen::VectorXd output_weights;    // h
  double output_bias = 0.0;

  int dim() const { return static_cast<int>(event_embeddings.cols()); }
  int hidden() const { return static_cast<int>(hidden_weights.rows()); }

  std::optional<EventId> event_row(const std::string& surface) const {
    auto it = event_index_.find(surface);
    if (it == event_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> word_row(const std::string& w) const {
    auto it = word_index_.find(w);
    if (it == word_index_.end()) return std::nullopt;
    return it->second;
  }

  void rebuild_index() {
    event_index_.clear();
    word_index_.clear();
    for (std::size_t i = 0; i < events.size(); ++i) event_index_.emplace(events[i], static_cast<EventId>(i));
    for (std::size_t i = 0; i < words.size(); ++i) word_index_.emplace(words[i], i);
  }

  // Throws ModelError unless every matrix agrees with the tables and dims.
  void validate() const {
    const auto d = event_embeddings.cols();
    const auto h = hidden_weights.rows();
    auto bad = [](const std::string& what) { throw ModelError("coherence model: " + what); };
    if (static_cast<std::size_t>(event_embeddings.rows()) != events.size()) bad("event table/embedding mismatch");
    if (d < 1 || h < 1) bad("empty dimensions");
    if (hidden_weights.cols() != 2 * d) bad("hidden weights must have 2*dim columns");
    if (hidden_bias.size() != h || output_weights.size() != h) bad("hidden size mismatch");
    if (kind == CoherenceKind::kInputEvent) {
      if (static_cast<std::size_t>(word_embeddings.rows()) != words.size()) bad("word table/embedding mismatch");
      if (!words.empty() && word_embeddings.cols() != d) bad("word embedding width mismatch");
    }
    if (event_index_.size() != events.size() || word_index_.size() != words.size()) {
      bad("duplicate table entries");
    }
  }

  friend bool operator==(const CoherenceModel& a, const CoherenceModel& b) {
    return a.kind == b.kind && a.margin == b.margin && a.seed == b.seed && a.events == b.events &&
           a.words == b.words && a.event_embeddings == b.event_embeddings &&
           a.word_embeddings == b.word_embeddings && a.hidden_weights == b.hidden_weights &&
           a.hidden_bias == b.hidden_bias && a.output_weights == b.output_weights &&
           a.output_bias == b.output_bias;
  }

 private:
  std::unordered_map<std::string, EventId> event_index_;
  std::unordered_map<std::string, std::size_t> word_index_;
};

struct CoherenceConfig {
  int dim = 64;
  int hidden = 128;
  double margin = 0.5;
  std::uint64_t seed = 1;
  double embedding_scale = 1.0;
};

// Embeddings uniform in (-s, s) with s = embedding_scale, Xavier-uniform
// layer weights, zero biases.
inline CoherenceModel init_coherence_model(CoherenceKind kind, std::vector<std::string> events,
                                           std::vector<std::string> words, const CoherenceConfig& cfg) {
  if (cfg.dim < 1 || cfg.hidden < 1) throw UsageError("coherence: dim and hidden must be >= 1");
  if (cfg.margin < 0.0) throw UsageError("coherence: margin must be >= 0");
  if (!(cfg.embedding_scale > 0.0)) throw UsageError("coherence: embedding_scale must be > 0");
  CoherenceModel m;
  m.kind = kind;
  m.margin = cfg.margin;
  m.seed = cfg.seed;
  m.events = std::move(events);
  if (kind == CoherenceKind::kInputEvent) m.words = std::move(words);
  m.rebuild_index();

  Rng rng(cfg.seed);
  const int d = cfg.dim;
  const int h = cfg.hidden;
  auto fill = [&](Eigen::MatrixXd& mat, double bound) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      for (Eigen::Index j = 0; j < mat.cols(); ++j) mat(i, j) = rng.uniform(-bound, bound);
    }
  };
  m.event_embeddings.resize(static_cast<Eigen::Index>(m.events.size()), d);
  fill(m.event_embeddings, cfg.embedding_scale);
  m.word_embeddings.resize(static_cast<Eigen::Index>(m.words.size()), d);
  fill(m.word_embeddings, cfg.embedding_scale);
  m.hidden_weights.resize(h, 2 * d);
  fill(m.hidden_weights, std::sqrt(6.0 / (2.0 * d + h)));
  m.hidden_bias = Eigen::VectorXd::Zero(h);
  Eigen::MatrixXd out(h, 1);
  fill(out, std::sqrt(6.0 / (h + 1.0)));
  m.output_weights = out.col(0);
  m.output_bias = 0.0;
  m.validate();
  return m;
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace coherence_detail {

struct Forward {
  Eigen::VectorXd input;   // [a; e]
  Eigen::VectorXd hidden;  // tanh activations
  double score = 0.5;
};

inline Forward forward(const CoherenceModel& m, const Eigen::VectorXd& anchor, EventId event) {
  Forward f;
  const int d = m.dim();
  f.input.resize(2 * d);
  f.input.head(d) = anchor;
  f.input.tail(d) = m.event_embeddings.row(event).transpose();
  f.hidden = (m.hidden_weights * f.input + m.hidden_bias).array().tanh().matrix();
  f.score = sigmoid(m.output_weights.dot(f.hidden) + m.output_bias);
  return f;
}

inline void check_event(const CoherenceModel& m, EventId e) {
  if (e >= m.events.size()) throw DataError("coherence model has no event id " + std::to_string(e));
}

// Rows of the known title words, with repetition. Empty when none is known.
inline std::vector<std::size_t> known_word_rows(const CoherenceModel& m, const std::vector<std::string>& title) {
  std::vector<std::size_t> rows;
  for (const std::string& w : title) {
    if (auto r = m.word_row(w)) rows.push_back(*r);
  }
  return rows;
}

inline Eigen::VectorXd mean_rows(const Eigen::MatrixXd& table, const std::vector<std::size_t>& rows) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(table.cols());
  for (std::size_t r : rows) v += table.row(static_cast<Eigen::Index>(r)).transpose();
  return v / static_cast<double>(rows.size());
}

}  // namespace coherence_detail

// f_event(a, b). Directed: f(a, b) != f(b, a) in general.
inline double score_event_pair(const CoherenceModel& m, EventId a, EventId b) {
  if (m.kind != CoherenceKind::kEventEvent) throw ModelError("score_event_pair needs an event_event model");
  coherence_detail::check_event(m, a);
  coherence_detail::check_event(m, b);
  return coherence_detail::forward(m, m.event_embeddings.row(a).transpose(), b).score;
}

// f_input(title, e). Unknown title words are skipped; a title with no known
// word scores a neutral 0.5.
inline double score_input_event(const CoherenceModel& m, const std::vector<std::string>& title, EventId e) {
  if (m.kind != CoherenceKind::kInputEvent) throw ModelError("score_input_event needs an input_event model");
  coherence_detail::check_event(m, e);
  const auto rows = coherence_detail::known_word_rows(m, title);
  if (rows.empty()) return 0.5;
  return coherence_detail::forward(m, coherence_detail::mean_rows(m.word_embeddings, rows), e).score;
}

inline double contrastive_loss(double pos, double neg, double margin) {
  return std::max(0.0, -pos + neg + margin);
}

// ---------------------------------------------------------------------------
// Training

struct TrainingPair {
  // Event row for event_event models, title tokens for input_event models.
  std::variant<EventId, std::vector<std::string>> anchor;
  EventId positive = 0;
  EventId negative = 0;
};

struct Gradients {
  Eigen::MatrixXd hidden_weights;
  Eigen::VectorXd hidden_bias;
  Eigen::VectorXd output_weights;
  double output_bias = 0.0;
  std::map<std::size_t, Eigen::VectorXd> event_rows;
  std::map<std::size_t, Eigen::VectorXd> word_rows;

  explicit Gradients(const CoherenceModel& m)
      : hidden_weights(Eigen::MatrixXd::Zero(m.hidden_weights.rows(), m.hidden_weights.cols())),
        hidden_bias(Eigen::VectorXd::Zero(m.hidden_bias.size())),
        output_weights(Eigen::VectorXd::Zero(m.output_weights.size())) {}

  static void add_row(std::map<std::size_t, Eigen::VectorXd>& rows, std::size_t r, const Eigen::VectorXd& g) {
    auto it = rows.find(r);
    if (it == rows.end()) {
      rows.emplace(r, g);
    } else {
      it->second += g;
    }
  }
};

// Loss of one pair; when `grad` is given, adds dLoss/dparams into it. An
// inactive hinge (loss exactly 0) contributes nothing.
inline double pair_loss(const CoherenceModel& m, const TrainingPair& pair, Gradients* grad = nullptr) {
  using namespace coherence_detail;
  check_event(m, pair.positive);
  check_event(m, pair.negative);
  Eigen::VectorXd anchor;
  std::vector<std::size_t> word_rows;
  if (const EventId* a = std::get_if<EventId>(&pair.anchor)) {
    if (m.kind != CoherenceKind::kEventEvent) throw ModelError("event anchor given to an input_event model");
    check_event(m, *a);
    anchor = m.event_embeddings.row(*a).transpose();
  } else {
    if (m.kind != CoherenceKind::kInputEvent) throw ModelError("title anchor given to an event_event model");
    word_rows = known_word_rows(m, std::get<std::vector<std::string>>(pair.anchor));
    if (word_rows.empty()) return 0.0;  // both scores pinned at 0.5
    anchor = mean_rows(m.word_embeddings, word_rows);
  }

  const Forward pos = forward(m, anchor, pair.positive);
  const Forward neg = forward(m, anchor, pair.negative);
  const double loss = contrastive_loss(pos.score, neg.score, m.margin);
  if (grad == nullptr || !(loss > 0.0)) return loss;

  const int d = m.dim();
  auto backprop = [&](const Forward& f, double dloss_dscore, EventId event) {
    const double g_out = dloss_dscore * f.score * (1.0 - f.score);
    grad->output_weights += g_out * f.hidden;
    grad->output_bias += g_out;
    const Eigen::VectorXd g_z =
        (g_out * m.output_weights).cwiseProduct((1.0 - f.hidden.array().square()).matrix());
    grad->hidden_weights += g_z * f.input.transpose();
    grad->hidden_bias += g_z;
    const Eigen::VectorXd g_in = m.hidden_weights.transpose() * g_z;
    Gradients::add_row(grad->event_rows, event, g_in.tail(d));
    if (const EventId* a = std::get_if<EventId>(&pair.anchor)) {
      Gradients::add_row(grad->event_rows, *a, g_in.head(d));
    } else {
      const Eigen::VectorXd share = g_in.head(d) / static_cast<double>(word_rows.size());
      for (std::size_t r : word_rows) Gradients::add_row(grad->word_rows, r, share);
    }
  };
  backprop(pos, -1.0, pair.positive);
  backprop(neg, +1.0, pair.negative);
  return loss;
}

// One SGD step. `weight_decay` shrinks the layer weights and the touched
// embedding rows by a factor (1 - lr * weight_decay) before the step; it is
// not part of the loss, so gradients stay those of the hinge alone.
inline void apply_gradients(CoherenceModel& m, const Gradients& g, double lr, double weight_decay = 0.0) {
  const double keep = 1.0 - lr * weight_decay;
  if (weight_decay > 0.0) {
    m.hidden_weights *= keep;
    m.output_weights *= keep;
  }
  m.hidden_weights -= lr * g.hidden_weights;
  m.hidden_bias -= lr * g.hidden_bias;
  m.output_weights -= lr * g.output_weights;
  m.output_bias -= lr * g.output_bias;
  for (const auto& [r, v] : g.event_rows) {
    auto row = m.event_embeddings.row(static_cast<Eigen::Index>(r));
    if (weight_decay > 0.0) row *= keep;
    row -= lr * v.transpose();
  }
  for (const auto& [r, v] : g.word_rows) {
    auto row = m.word_embeddings.row(static_cast<Eigen::Index>(r));
    if (weight_decay > 0.0) row *= keep;
    row -= lr * v.transpose();
  }
}

struct TrainOptions {
  int epochs = 10;
  double lr = 0.05;
  std::uint64_t seed = 1;
  int batch_size = 1;  // gradients are averaged over each mini-batch
  double weight_decay = 0.0;
};

struct TrainResult {
  std::vector<double> epoch_loss;  // mean pair loss per epoch
};

using EpochPairs = std::function<std::vector<TrainingPair>(Rng&)>;

// Mini-batch SGD over pairs visited in a seeded random order. Losses of a
// batch are measured before its update. `epoch_pairs` is called once per
// epoch so negatives can be redrawn.
inline TrainResult train(CoherenceModel& m, const EpochPairs& epoch_pairs, const TrainOptions& options) {
  if (!(options.lr >= 0.0)) throw UsageError("train: lr must be >= 0");
  if (options.epochs < 0) throw UsageError("train: epochs must be >= 0");
  if (options.batch_size < 1) throw UsageError("train: batch_size must be >= 1");
  if (!(options.weight_decay >= 0.0)) throw UsageError("train: weight_decay must be >= 0");
  m.validate();
  Rng rng(options.seed);
  TrainResult result;
  const std::size_t batch = static_cast<std::size_t>(options.batch_size);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::vector<TrainingPair> pairs = epoch_pairs(rng);
    if (pairs.empty()) throw DataError("train: no training pairs");
    rng.shuffle(pairs);
    double total = 0.0;
    for (std::size_t start = 0; start < pairs.size(); start += batch) {
      const std::size_t end = std::min(pairs.size(), start + batch);
      Gradients g(m);
      bool active = false;
      for (std::size_t i = start; i < end; ++i) {
        const double loss = pair_loss(m, pairs[i], &g);
        total += loss;
        active = active || loss > 0.0;
      }
      if (active && options.lr > 0.0) {
        apply_gradients(m, g, options.lr / static_cast<double>(end - start), options.weight_decay);
      }
    }
    result.epoch_loss.push_back(total / static_cast<double>(pairs.size()));
  }
  return result;
}

inline TrainResult train(CoherenceModel& m, std::vector<TrainingPair> pairs, const TrainOptions& options) {
  if (pairs.empty()) throw DataError("train: no training pairs");
  return train(m, [&pairs](Rng&) { return pairs; }, options);
}

// Builds positives from story chains and draws negatives uniformly from the
// event occurrences of other stories in the same topic.
//   event_event: every ordered pair (e_i, e_j), i < j, of distinct events in a story
//   input_event: (title, e) for every event of a story
class PairSampler {
 public:
  PairSampler(const CoherenceModel& model, const std::vector<EventChain>& chains,
              const std::map<std::string, int>& story_topic, int neg_per_pos)
      : kind_(model.kind), neg_per_pos_(neg_per_pos) {
    if (neg_per_pos < 1) throw UsageError("neg_per_pos must be >= 1");
    for (std::size_t s = 0; s < chains.size(); ++s) {
      const EventChain& c = chains[s];
      auto t = story_topic.find(c.story_id);
      const int topic = t == story_topic.end() ? 0 : t->second;
      std::vector<EventId> ids;
      for (const Event& e : c.events) {
        auto row = model.event_row(e.surface());
        if (!row) throw DataError("event '" + e.surface() + "' missing from coherence model");
        ids.push_back(*row);
        pool_[topic].push_back({s, *row});
      }
      if (kind_ == CoherenceKind::kEventEvent) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
          for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (ids[i] != ids[j]) positives_.push_back({ids[i], {}, ids[j], s, topic});
          }
        }
      } else if (!c.title_tokens.empty()) {
        for (EventId id : ids) positives_.push_back({0, c.title_tokens, id, s, topic});
      }
    }
  }

  std::size_t num_positives() const { return positives_.size(); }

  std::vector<TrainingPair> operator()(Rng& rng) const {
    std::vector<TrainingPair> out;
    out.reserve(positives_.size() * neg_per_pos_);
    for (const Positive& p : positives_) {
      const auto& pool = pool_.at(p.topic);
      for (int n = 0; n < neg_per_pos_; ++n) {
        for (int attempt = 0; attempt < 32; ++attempt) {
          const Occurrence& o = pool[rng.below(pool.size())];
          if (o.story == p.story || o.event == p.positive) continue;
          TrainingPair tp;
          if (kind_ == CoherenceKind::kEventEvent) {
            tp.anchor = p.anchor_event;
          } else {
            tp.anchor = p.title;
          }
          tp.positive = p.positive;
          tp.negative = o.event;
          out.push_back(std::move(tp));
          break;
        }
      }
    }
    return out;
  }

 private:
  struct Positive {
    EventId anchor_event;
    std::vector<std::string> title;
    EventId positive;
    std::size_t story;
    int topic;
  };
  struct Occurrence {
    std::size_t story;
    EventId event;
  };

  CoherenceKind kind_;
  int neg_per_pos_;
  std::vector<Positive> positives_;
  std::map<int, std::vector<Occurrence>> pool_;
};

// Event and title-word tables for a new model, in sorted order.
inline std::vector<std::string> event_vocabulary(const std::vector<EventChain>& chains) {
  std::set<std::string> s;
  for (const EventChain& c : chains) {
    for (const Event& e : c.events) s.insert(e.surface());
  }
  return {s.begin(), s.end()};
}

inline std::vector<std::string> title_vocabulary(const std::vector<EventChain>& chains) {
  std::set<std::string> s;
  for (const EventChain& c : chains) s.insert(c.title_tokens.begin(), c.title_tokens.end());
  return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// Fast scoring over a fixed event set: the hidden pre-activation splits into
// W_left a + W_right e, so both halves are projected once per event.

class EventPairScorer {
 public:
  // `rows[i]` is the model row of local event i.
  EventPairScorer(const CoherenceModel& m, std::vector<EventId> rows) : model_(&m), rows_(std::move(rows)) {
    if (m.kind != CoherenceKind::kEventEvent) throw ModelError("EventPairScorer needs an event_event model");
    const int d = m.dim();
    left_.resize(m.hidden(), static_cast<Eigen::Index>(rows_.size()));
    right_.resize(m.hidden(), static_cast<Eigen::Index>(rows_.size()));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      coherence_detail::check_event(m, rows_[i]);
      const Eigen::VectorXd e = m.event_embeddings.row(rows_[i]).transpose();
      left_.col(static_cast<Eigen::Index>(i)) = m.hidden_weights.leftCols(d) * e + m.hidden_bias;
      right_.col(static_cast<Eigen::Index>(i)) = m.hidden_weights.rightCols(d) * e;
    }
  }

  // f(local a, local b)
  double operator()(std::size_t a, std::size_t b) const {
    const auto z = left_.col(static_cast<Eigen::Index>(a)) + right_.col(static_cast<Eigen::Index>(b));
    return sigmoid(model_->output_weights.dot(z.array().tanh().matrix()) + model_->output_bias);
  }

  double symmetric(std::size_t a, std::size_t b) const { return 0.5 * ((*this)(a, b) + (*this)(b, a)); }

 private:
  const CoherenceModel* model_;
  std::vector<EventId> rows_;
  Eigen::MatrixXd left_;
  Eigen::MatrixXd right_;
};

// Model rows of every graph event; throws if the model lacks one.
inline std::vector<EventId> model_rows_for(const CoherenceModel& m, const EventGraph& g) {
  std::vector<EventId> rows;
  rows.reserve(g.size());
  for (const Event& e : g.events()) {
    auto r = m.event_row(e.surface());
    if (!r) throw DataError("coherence model has no event '" + e.surface() + "'");
    rows.push_back(*r);
  }
  return rows;
}

struct ExclusiveOptions {
  // Above this many unordered pairs, a seeded uniform sample of this size is
  // scored instead of every pair.
  std::uint64_t max_pairs = 2'000'000;
  std::uint64_t seed = 1;
};

// The unordered pairs considered for exclusivity: all of them, or a seeded
// sample when there are more than max_pairs.
inline std::vector<std::pair<EventId, EventId>> exclusive_candidates(const EventGraph& g,
                                                                     const ExclusiveOptions& opt) {
  std::vector<std::pair<EventId, EventId>> out;
  const std::uint64_t n = g.size();
  const std::uint64_t total = n < 2 ? 0 : n * (n - 1) / 2;
  if (total <= opt.max_pairs) {
    out.reserve(total);
    for (EventId a = 0; a < n; ++a) {
      for (EventId b = a + 1; b < n; ++b) out.emplace_back(a, b);
    }
    return out;
  }
  Rng rng(opt.seed);
  std::set<std::pair<EventId, EventId>> seen;
  while (seen.size() < opt.max_pairs) {
    auto a = static_cast<EventId>(rng.below(n));
    auto b = static_cast<EventId>(rng.below(n));
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    seen.emplace(a, b);
  }
  return {seen.begin(), seen.end()};
}

// Symmetric scores s(a,b) = (f(a,b) + f(b,a)) / 2 over the candidate pairs.
inline std::vector<double> symmetric_pair_scores(const CoherenceModel& m, const EventGraph& g,
                                                 const std::vector<std::pair<EventId, EventId>>& pairs) {
  const EventPairScorer scorer(m, model_rows_for(m, g));
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) out.push_back(scorer.symmetric(a, b));
  return out;
}

// Linear-interpolated percentile (0..100) of a sample.
inline double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw DataError("percentile of an empty sample");
  if (pct < 0.0 || pct > 100.0) throw UsageError("percentile must be in [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// tau at the given percentile of the symmetric pair scores of a graph.
inline double tau_at_percentile(const CoherenceModel& m, const EventGraph& g, double pct,
                                const ExclusiveOptions& opt = {}) {
  const auto pairs = exclusive_candidates(g, opt);
  if (pairs.empty()) return 0.5;
  return percentile(symmetric_pair_scores(m, g, pairs), pct);
}

// Marks {a, b} exclusive iff s(a, b) < tau, replacing the graph's previous
// exclusive set. Returns the new set.
inline std::set<std::pair<EventId, EventId>> derive_exclusive(const CoherenceModel& m, EventGraph& g, double tau,
                                                              const ExclusiveOptions& opt = {}) {
  if (!(tau > 0.0 && tau < 1.0)) throw UsageError("derive_exclusive: tau must be in (0, 1)");
  const auto pairs = exclusive_candidates(g, opt);
  const auto scores = symmetric_pair_scores(m, g, pairs);
  g.clear_exclusive();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (scores[i] < tau) g.add_exclusive(pairs[i].first, pairs[i].second);
  }
  return g.exclusive_pairs();
}

// ---------------------------------------------------------------------------
// Checkpoint
//
//   graphplan-coherence 1
//   kind <event_event|input_event> dim <d> hidden <h> margin <m> seed <s>
//   events <E>            then E surfaces, one per line
//   words <V>             then V words, one per line
//   event_embeddings      E lines of d reals
//   word_embeddings       V lines of d reals
//   hidden_weights        h lines of 2d reals
//   hidden_bias           one line of h reals
//   output_weights        one line of h reals
//   output_bias           one real

inline void write_coherence_model(std::ostream& out, const CoherenceModel& m) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "graphplan-coherence 1\n";
  out << "kind " << kind_name(m.kind) << " dim " << m.dim() << " hidden " << m.hidden() << " margin " << m.margin
      << " seed " << m.seed << '\n';
  out << "events " << m.events.size() << '\n';
  for (const auto& e : m.events) out << e << '\n';
  out << "words " << m.words.size() << '\n';
  for (const auto& w : m.words) out << w << '\n';
  auto write_matrix = [&](const char* name, const Eigen::MatrixXd& mat) {
    out << name << '\n';
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      for (Eigen::Index j = 0; j < mat.cols(); ++j) out << (j ? " " : "") << mat(i, j);
      out << '\n';
    }
  };
  write_matrix("event_embeddings", m.event_embeddings);
  write_matrix("word_embeddings", m.word_embeddings);
  write_matrix("hidden_weights", m.hidden_weights);
  write_matrix("hidden_bias", m.hidden_bias.transpose());
  write_matrix("output_weights", m.output_weights.transpose());
  out << "output_bias\n" << m.output_bias << '\n';
}

inline CoherenceModel read_coherence_model(std::istream& in) {
  auto fail = [](const std::string& what) { throw DataError("coherence model: " + what); };
  auto expect = [&](const char* key) {
    std::string tok;
    if (!(in >> tok) || tok != key) fail(std::string("expected '") + key + "'");
  };
  std::string tok;
  int version = 0;
  if (!(in >> tok >> version) || tok != "graphplan-coherence") fail("not a coherence model file");
  if (version != 1) fail("unsupported version");
  CoherenceModel m;
  std::string kind;
  int d = 0, h = 0;
  expect("kind");
  in >> kind;
  if (kind == "event_event") {
    m.kind = CoherenceKind::kEventEvent;
  } else if (kind == "input_event") {
    m.kind = CoherenceKind::kInputEvent;
  } else {
    fail("unknown kind '" + kind + "'");
  }
  expect("dim");
  in >> d;
  expect("hidden");
  in >> h;
  expect("margin");
  in >> m.margin;
  expect("seed");
  in >> m.seed;
  if (!in || d < 1 || h < 1) fail("bad header");
  std::size_t n = 0;
  expect("events");
  in >> n;
  m.events.resize(n);
  for (auto& e : m.events) in >> e;
  expect("words");
  in >> n;
  m.words.resize(n);
  for (auto& w : m.words) in >> w;
  if (!in) fail("truncated tables");
  auto read_matrix = [&](const char* name, Eigen::Index rows, Eigen::Index cols) {
    expect(name);
    Eigen::MatrixXd mat(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        if (!(in >> mat(i, j))) fail(std::string("truncated ") + name);
      }
    }
    return mat;
  };
  m.event_embeddings = read_matrix("event_embeddings", static_cast<Eigen::Index>(m.events.size()), d);
  m.word_embeddings = read_matrix("word_embeddings", static_cast<Eigen::Index>(m.words.size()), d);
  m.hidden_weights = read_matrix("hidden_weights", h, 2 * d);
  m.hidden_bias = read_matrix("hidden_bias", 1, h).row(0).transpose();
  m.output_weights = read_matrix("output_weights", 1, h).row(0).transpose();
  expect("output_bias");
  if (!(in >> m.output_bias)) fail("truncated output_bias");
  m.rebuild_index();
  m.validate();
  return m;
}

inline void save_coherence_model(const std::string& path, const CoherenceModel& m) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write coherence model '" + path + "'");
  write_coherence_model(out, m);
}

inline CoherenceModel load_coherence_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open coherence model '" + path + "'");
  return read_coherence_model(in);
}

}  // namespace graphplan
