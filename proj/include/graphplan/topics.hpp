#pragma once

// LDA with a collapsed Gibbs sampler, fold-in inference for unseen
// documents, and a plain-text checkpoint format:
//
//   graphplan-lda 1
//   K <k> V <v> D <d>
//   alpha <a> beta <b> seed <s> iterations <n>
//   vocab                      V lines: one word each, index = line order
//   docs                       D lines: <doc id> <k counts>
//   topic_word                 K lines: V counts each
//
// Reals are written with max_digits10 precision so a round trip is exact.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphplan/corpus.hpp"
#include "graphplan/error.hpp"
#include "graphplan/lexicon.hpp"
#include "graphplan/random.hpp"
#include "graphplan/text.hpp"

namespace graphplan {

struct LdaOptions {
  int topics = 500;
  double alpha = -1.0;  // <= 0 means 50 / topics
  double beta = 0.01;
  int iterations = 500;
  std::uint64_t seed = 1;

  double resolved_alpha() const { return alpha > 0.0 ? alpha : 50.0 / topics; }
};

class TopicModel {
 public:
  int num_topics() const { return k_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::size_t num_docs() const { return doc_ids_.size(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::uint64_t seed() const { return seed_; }
  int iterations() const { return iterations_; }

  const std::vector<std::string>& vocab() const { return vocab_; }
  std::optional<std::size_t> word_index(const std::string& w) const {
    auto it = word_index_.find(w);
    if (it == word_index_.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }

  std::int64_t topic_word(int k, std::size_t w) const { return topic_word_[k * vocab_.size() + w]; }
  std::int64_t topic_total(int k) const { return topic_totals_[k]; }
  std::int64_t doc_topic(std::size_t d, int k) const { return doc_topic_[d * k_ + k]; }
  const std::vector<std::int64_t>& topic_word_counts() const { return topic_word_; }
  const std::vector<std::int64_t>& topic_totals() const { return topic_totals_; }
  const std::vector<std::int64_t>& doc_topic_counts() const { return doc_topic_; }

  friend bool operator==(const TopicModel&, const TopicModel&) = default;

 private:
  friend TopicModel fit_lda(const std::vector<std::vector<std::string>>&, const std::vector<std::string>&,
                            const LdaOptions&);
  friend TopicModel read_topic_model(std::istream&);

  void set_vocab(std::vector<std::string> vocab) {
    vocab_ = std::move(vocab);
    word_index_.clear();
    for (std::size_t i = 0; i < vocab_.size(); ++i) word_index_.emplace(vocab_[i], i);
  }

  int k_ = 0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::uint64_t seed_ = 0;
  int iterations_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> word_index_;
  std::vector<std::string> doc_ids_;
  std::vector<std::int64_t> topic_word_;    // K x V
  std::vector<std::int64_t> topic_totals_;  // K
  std::vector<std::int64_t> doc_topic_;     // D x K
};

// Collapsed Gibbs sampling. Vocabulary indices follow sorted word order so
// the model does not depend on document order beyond the sampling sequence.
inline TopicModel fit_lda(const std::vector<std::vector<std::string>>& docs,
                          const std::vector<std::string>& doc_ids, const LdaOptions& options) {
  if (options.topics < 1) throw UsageError("topics: K must be >= 1");
  const double alpha = options.resolved_alpha();
  if (!(alpha > 0.0) || !(options.beta > 0.0)) throw UsageError("topics: alpha and beta must be > 0");
  if (options.iterations < 0) throw UsageError("topics: iterations must be >= 0");
  if (docs.empty()) throw DataError("topics: no documents");
  if (doc_ids.size() != docs.size()) throw UsageError("topics: one id per document required");

  std::vector<std::string> vocab;
  for (const auto& d : docs) vocab.insert(vocab.end(), d.begin(), d.end());
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  if (vocab.empty()) throw DataError("topics: empty vocabulary");

  TopicModel m;
  m.k_ = options.topics;
  m.alpha_ = alpha;
  m.beta_ = options.beta;
  m.seed_ = options.seed;
  m.iterations_ = options.iterations;
  m.set_vocab(std::move(vocab));
  m.doc_ids_ = doc_ids;

  const int K = m.k_;
  const std::size_t V = m.vocab_.size();
  const std::size_t D = docs.size();
  m.topic_word_.assign(static_cast<std::size_t>(K) * V, 0);
  m.topic_totals_.assign(K, 0);
  m.doc_topic_.assign(D * K, 0);

  std::vector<std::vector<std::uint32_t>> words(D);
  std::vector<std::vector<int>> z(D);
  Rng rng(options.seed);
  for (std::size_t d = 0; d < D; ++d) {
    for (const std::string& w : docs[d]) {
      const auto wi = static_cast<std::uint32_t>(*m.word_index(w));
      const int k = static_cast<int>(rng.below(K));
      words[d].push_back(wi);
      z[d].push_back(k);
      ++m.topic_word_[k * V + wi];
      ++m.topic_totals_[k];
      ++m.doc_topic_[d * K + k];
    }
  }

  const double vbeta = static_cast<double>(V) * m.beta_;
  std::vector<double> p(K);
  for (int it = 0; it < options.iterations; ++it) {
    for (std::size_t d = 0; d < D; ++d) {
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::uint32_t w = words[d][i];
        int k = z[d][i];
        --m.topic_word_[k * V + w];
        --m.topic_totals_[k];
        --m.doc_topic_[d * K + k];
        double total = 0.0;
        for (int t = 0; t < K; ++t) {
          total += (static_cast<double>(m.doc_topic_[d * K + t]) + alpha) *
                   (static_cast<double>(m.topic_word_[t * V + w]) + m.beta_) /
                   (static_cast<double>(m.topic_totals_[t]) + vbeta);
          p[t] = total;
        }
        const double r = rng.uniform() * total;
        k = static_cast<int>(std::upper_bound(p.begin(), p.end(), r) - p.begin());
        if (k >= K) k = K - 1;
        z[d][i] = k;
        ++m.topic_word_[k * V + w];
        ++m.topic_totals_[k];
        ++m.doc_topic_[d * K + k];
      }
    }
  }
  return m;
}

struct InferOptions {
  int iterations = 50;
  int burn_in = 10;
  std::uint64_t seed = 7;
};

// Topic proportions of an unseen document by Gibbs fold-in with the
// topic-word counts held fixed. Unknown words are skipped; with no known
// words the result is the uniform prior.
inline std::vector<double> infer_topic(const TopicModel& m, const std::vector<std::string>& tokens,
                                       const InferOptions& options = {}) {
  const int K = m.num_topics();
  std::vector<std::uint32_t> words;
  for (const std::string& t : tokens) {
    if (auto wi = m.word_index(t)) words.push_back(static_cast<std::uint32_t>(*wi));
  }
  std::vector<double> theta(K, 1.0 / K);
  if (words.empty() || K == 1) return theta;

  const double alpha = m.alpha();
  const double beta = m.beta();
  const double vbeta = static_cast<double>(m.vocab_size()) * beta;
  // phi is fixed during fold-in
  std::vector<double> phi(static_cast<std::size_t>(K) * words.size());
  for (int k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      phi[k * words.size() + i] = (static_cast<double>(m.topic_word(k, words[i])) + beta) /
                                  (static_cast<double>(m.topic_total(k)) + vbeta);
    }
  }

  Rng rng(options.seed);
  std::vector<int> z(words.size());
  std::vector<std::int64_t> n(K, 0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    z[i] = static_cast<int>(rng.below(K));
    ++n[z[i]];
  }
  std::vector<double> acc(K, 0.0);
  std::vector<double> p(K);
  int samples = 0;
  const int iterations = std::max(options.iterations, options.burn_in + 1);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      --n[z[i]];
      double total = 0.0;
      for (int k = 0; k < K; ++k) {
        total += (static_cast<double>(n[k]) + alpha) * phi[k * words.size() + i];
        p[k] = total;
      }
      const double r = rng.uniform() * total;
      int k = static_cast<int>(std::upper_bound(p.begin(), p.end(), r) - p.begin());
      if (k >= K) k = K - 1;
      z[i] = k;
      ++n[k];
    }
    if (it >= options.burn_in) {
      ++samples;
      for (int k = 0; k < K; ++k) acc[k] += static_cast<double>(n[k]);
    }
  }
  const double denom = static_cast<double>(words.size()) + K * alpha;
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    theta[k] = (acc[k] / samples + alpha) / denom;
    sum += theta[k];
  }
  for (double& t : theta) t /= sum;
  return theta;
}

// Index of the largest value, lowest index on ties.
inline int argmax_topic(const std::vector<double>& weights) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(weights.size()); ++k) {
    if (weights[k] > weights[best]) best = k;
  }
  return best;
}

// Hard topic per training document: argmax of (n_dk + alpha), i.e. of n_dk.
inline std::map<std::string, int> assign_story_topics(const TopicModel& m,
                                                      const std::vector<EventChain>& chains) {
  std::unordered_map<std::string, std::size_t> doc_index;
  for (std::size_t d = 0; d < m.num_docs(); ++d) doc_index.emplace(m.doc_ids()[d], d);
  std::map<std::string, int> out;
  for (const EventChain& c : chains) {
    auto it = doc_index.find(c.story_id);
    if (it == doc_index.end()) throw DataError("story '" + c.story_id + "' is not in the topic model");
    int best = 0;
    for (int k = 1; k < m.num_topics(); ++k) {
      if (m.doc_topic(it->second, k) > m.doc_topic(it->second, best)) best = k;
    }
    out[c.story_id] = best;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Preprocessing

struct LdaPreprocess {
  bool remove_stopwords = true;
  int min_doc_freq = 2;
};

// Title words plus story words, stopwords removed, words appearing in fewer
// than `min_doc_freq` documents dropped.
inline std::vector<std::vector<std::string>> lda_documents(const std::vector<Story>& stories,
                                                           const LdaPreprocess& pre = {}) {
  const auto& stop = lexicon::stopwords();
  std::vector<std::vector<std::string>> docs;
  std::unordered_map<std::string, int> df;
  for (const Story& s : stories) {
    std::vector<std::string> doc;
    auto add = [&](const std::string& w) {
      if (pre.remove_stopwords && stop.count(w)) return;
      if (w.size() < 2) return;
      doc.push_back(w);
    };
    for (const std::string& w : s.title_tokens) add(w);
    for (const std::string& sent : s.sentences) {
      for (const std::string& w : content_words(sent)) add(w);
    }
    std::vector<std::string> uniq = doc;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (const std::string& w : uniq) ++df[w];
    docs.push_back(std::move(doc));
  }
  if (pre.min_doc_freq > 1) {
    for (auto& doc : docs) {
      std::erase_if(doc, [&](const std::string& w) { return df[w] < pre.min_doc_freq; });
    }
  }
  return docs;
}

// ---------------------------------------------------------------------------
// Checkpoint

inline void write_topic_model(std::ostream& out, const TopicModel& m) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "graphplan-lda 1\n";
  out << "K " << m.num_topics() << " V " << m.vocab_size() << " D " << m.num_docs() << '\n';
  out << "alpha " << m.alpha() << " beta " << m.beta() << " seed " << m.seed() << " iterations "
      << m.iterations() << '\n';
  out << "vocab\n";
  for (const std::string& w : m.vocab()) out << w << '\n';
  out << "docs\n";
  for (std::size_t d = 0; d < m.num_docs(); ++d) {
    out << m.doc_ids()[d];
    for (int k = 0; k < m.num_topics(); ++k) out << ' ' << m.doc_topic(d, k);
    out << '\n';
  }
  out << "topic_word\n";
  for (int k = 0; k < m.num_topics(); ++k) {
    for (std::size_t w = 0; w < m.vocab_size(); ++w) out << (w ? " " : "") << m.topic_word(k, w);
    out << '\n';
  }
}

inline TopicModel read_topic_model(std::istream& in) {
  auto fail = [](const std::string& what) -> void { throw DataError("topic model: " + what); };
  std::string tok;
  int version = 0;
  if (!(in >> tok >> version) || tok != "graphplan-lda") fail("not a topic model file");
  if (version != 1) fail("unsupported version");
  TopicModel m;
  std::size_t V = 0, D = 0;
  std::string kk, vv, dd, a, b, s, it;
  if (!(in >> kk >> m.k_ >> vv >> V >> dd >> D) || kk != "K" || vv != "V" || dd != "D" || m.k_ < 1) {
    fail("bad dimension line");
  }
  if (!(in >> a >> m.alpha_ >> b >> m.beta_ >> s >> m.seed_ >> it >> m.iterations_) || a != "alpha" ||
      b != "beta" || s != "seed" || it != "iterations") {
    fail("bad hyperparameter line");
  }
  if (!(in >> tok) || tok != "vocab") fail("missing vocab section");
  std::vector<std::string> vocab(V);
  for (auto& w : vocab) {
    if (!(in >> w)) fail("truncated vocab");
  }
  m.set_vocab(std::move(vocab));
  if (m.word_index_.size() != V) fail("duplicate vocab entries");
  if (!(in >> tok) || tok != "docs") fail("missing docs section");
  const int K = m.k_;
  m.doc_ids_.resize(D);
  m.doc_topic_.assign(D * K, 0);
  for (std::size_t d = 0; d < D; ++d) {
    if (!(in >> m.doc_ids_[d])) fail("truncated docs");
    for (int k = 0; k < K; ++k) {
      if (!(in >> m.doc_topic_[d * K + k]) || m.doc_topic_[d * K + k] < 0) fail("bad doc counts");
    }
  }
  if (!(in >> tok) || tok != "topic_word") fail("missing topic_word section");
  m.topic_word_.assign(static_cast<std::size_t>(K) * V, 0);
  m.topic_totals_.assign(K, 0);
  for (int k = 0; k < K; ++k) {
    for (std::size_t w = 0; w < V; ++w) {
      std::int64_t& c = m.topic_word_[k * V + w];
      if (!(in >> c) || c < 0) fail("bad topic_word counts");
      m.topic_totals_[k] += c;
    }
  }
  return m;
}

inline void save_topic_model(const std::string& path, const TopicModel& m) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write topic model '" + path + "'");
  write_topic_model(out, m);
}

inline TopicModel load_topic_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open topic model '" + path + "'");
  return read_topic_model(in);
}

// Story -> topic assignments stored next to the graphs (assignments.txt).
inline void write_assignments(std::ostream& out, const std::map<std::string, int>& a) {
  out << "graphplan-assignments 1\n";
  for (const auto& [id, k] : a) out << id << ' ' << k << '\n';
}

inline std::map<std::string, int> read_assignments(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "graphplan-assignments 1") {
    throw DataError("not an assignments file");
  }
  std::map<std::string, int> a;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::istringstream ss(line);
    std::string id;
    int k = 0;
    if (!(ss >> id >> k)) throw DataError("bad assignments line '" + line + "'");
    a[id] = k;
  }
  return a;
}

}  // namespace graphplan
