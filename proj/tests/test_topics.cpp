#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace graphplan;
using namespace graphplan::testing;

namespace {

void expect_count_invariants(const TopicModel& m, const std::vector<std::vector<std::string>>& docs) {
  std::int64_t tokens = 0;
  for (const auto& d : docs) tokens += static_cast<std::int64_t>(d.size());
  std::int64_t totals = 0;
  for (int k = 0; k < m.num_topics(); ++k) {
    std::int64_t row = 0;
    for (std::size_t w = 0; w < m.vocab_size(); ++w) {
      EXPECT_GE(m.topic_word(k, w), 0);
      row += m.topic_word(k, w);
    }
    EXPECT_EQ(row, m.topic_total(k));
    totals += m.topic_total(k);
  }
  EXPECT_EQ(totals, tokens);
  for (std::size_t d = 0; d < m.num_docs(); ++d) {
    std::int64_t n = 0;
    for (int k = 0; k < m.num_topics(); ++k) n += m.doc_topic(d, k);
    EXPECT_EQ(n, static_cast<std::int64_t>(docs[d].size()));
  }
  for (std::size_t i = 0; i < m.vocab_size(); ++i) EXPECT_EQ(*m.word_index(m.vocab()[i]), i);
}

LdaOptions opts(int k, int iters, std::uint64_t seed, double alpha = -1.0) {
  LdaOptions o;
  o.topics = k;
  o.iterations = iters;
  o.seed = seed;
  o.alpha = alpha;
  return o;
}

}  // namespace

TEST(Lda, SingleTopicTakesEveryToken) {
  const std::vector<std::vector<std::string>> docs{{"a", "b", "a"}, {"c"}, {"b", "c", "d", "d"}};
  const TopicModel m = fit_lda(docs, {"x", "y", "z"}, opts(1, 20, 3));
  for (std::size_t d = 0; d < docs.size(); ++d) EXPECT_EQ(m.doc_topic(d, 0), static_cast<std::int64_t>(docs[d].size()));
  expect_count_invariants(m, docs);
}

TEST(Lda, DefaultAlphaIsFiftyOverK) {
  EXPECT_DOUBLE_EQ(opts(10, 1, 1).resolved_alpha(), 5.0);
  EXPECT_DOUBLE_EQ(opts(10, 1, 1, 0.3).resolved_alpha(), 0.3);
}

TEST(Lda, PlantedTwoTopicPurity) {
  Rng rng(17);
  const PlantedCorpus c = planted_corpus(rng, 2, 100, 20, 15);
  const TopicModel m = fit_lda(c.docs, c.ids, opts(2, 200, 5));
  expect_count_invariants(m, c.docs);
  EXPECT_GE(purity(hard_topics(m), c.labels), 0.9);

  std::vector<EventChain> chains;
  for (const auto& id : c.ids) chains.push_back(EventChain{id, {}, {}});
  const auto assigned = assign_story_topics(m, chains);
  const auto majority = topic_labels(m, c.labels);
  int agree = 0;
  for (std::size_t d = 0; d < c.ids.size(); ++d) agree += majority[static_cast<std::size_t>(assigned.at(c.ids[d]))] == c.labels[d];
  EXPECT_GE(agree, static_cast<int>(0.9 * static_cast<double>(c.ids.size())));
}

TEST(Lda, SameSeedSameCounts) {
  Rng rng(4);
  const PlantedCorpus c = planted_corpus(rng, 3, 20, 10, 8);
  const TopicModel a = fit_lda(c.docs, c.ids, opts(3, 30, 9));
  const TopicModel b = fit_lda(c.docs, c.ids, opts(3, 30, 9));
  EXPECT_EQ(a.topic_word_counts(), b.topic_word_counts());
  EXPECT_EQ(a.doc_topic_counts(), b.doc_topic_counts());
  EXPECT_TRUE(a == b);
}

TEST(Lda, RejectsBadInput) {
  EXPECT_THROW(fit_lda({{"a"}}, {"x"}, opts(0, 1, 1)), UsageError);
  EXPECT_THROW(fit_lda({}, {}, opts(2, 1, 1)), DataError);
  EXPECT_THROW(fit_lda({{}, {}}, {"x", "y"}, opts(2, 1, 1)), DataError);
  LdaOptions bad = opts(2, 1, 1);
  bad.beta = 0.0;
  EXPECT_THROW(fit_lda({{"a"}}, {"x"}, bad), UsageError);
}

TEST(Infer, UnseenAndEmptyGiveUniform) {
  const TopicModel m = fit_lda({{"a", "b"}, {"c", "d"}}, {"x", "y"}, opts(4, 10, 1));
  for (const auto& tokens : {std::vector<std::string>{}, std::vector<std::string>{"zzz", "qqq"}}) {
    const auto theta = infer_topic(m, tokens);
    ASSERT_EQ(theta.size(), 4u);
    for (double t : theta) EXPECT_DOUBLE_EQ(t, 0.25);
  }
}

TEST(Infer, PlantedTitlesRouteToTheirTopicAndSumToOne) {
  Rng rng(23);
  const PlantedCorpus c = planted_corpus(rng, 3, 50, 12, 12);
  const TopicModel m = fit_lda(c.docs, c.ids, opts(3, 150, 2, 0.1));
  const auto labels = topic_labels(m, c.labels);
  int hits = 0;
  const int trials = 60;
  for (int i = 0; i < trials; ++i) {
    const int planted = i % 3;
    std::vector<std::string> title{planted_word(planted, rng.below(12)), planted_word(planted, rng.below(12))};
    const auto theta = infer_topic(m, title);
    EXPECT_NEAR(std::accumulate(theta.begin(), theta.end(), 0.0), 1.0, 1e-9);
    for (double t : theta) EXPECT_GT(t, 0.0);
    hits += labels[static_cast<std::size_t>(argmax_topic(theta))] == planted;
  }
  EXPECT_GE(hits, static_cast<int>(0.9 * trials));
}

TEST(Infer, DeterministicUnderSeed) {
  Rng rng(1);
  const PlantedCorpus c = planted_corpus(rng, 2, 20, 10, 10);
  const TopicModel m = fit_lda(c.docs, c.ids, opts(2, 50, 2));
  EXPECT_EQ(infer_topic(m, c.docs[0]), infer_topic(m, c.docs[0]));
}

TEST(Assign, TiesGoToLowestTopic) {
  EXPECT_EQ(argmax_topic({0.25, 0.25, 0.25, 0.25}), 0);
  EXPECT_EQ(argmax_topic({0.1, 0.45, 0.45}), 1);
  const TopicModel m = fit_lda({{"a"}}, {"only"}, opts(1, 5, 1));
  EXPECT_EQ(assign_story_topics(m, {EventChain{"only", {}, {}}}), (std::map<std::string, int>{{"only", 0}}));
  EXPECT_THROW(assign_story_topics(m, {EventChain{"other", {}, {}}}), DataError);
}

TEST(Preprocess, StopwordsAndDocumentFrequency) {
  std::vector<Story> stories{
      {"a", {"the", "cake"}, {"Sam baked the cake."}, std::nullopt},
      {"b", {"cake"}, {"Ann ate a cake."}, std::nullopt},
  };
  const auto docs = lda_documents(stories, LdaPreprocess{true, 2});
  EXPECT_EQ(docs[0], (std::vector<std::string>{"cake", "cake"}));
  EXPECT_EQ(docs[1], (std::vector<std::string>{"cake", "cake"}));
  const auto all = lda_documents(stories, LdaPreprocess{false, 1});
  EXPECT_EQ(all[0].front(), "the");
}

TEST(Checkpoint, RoundTrip) {
  Rng rng(8);
  const PlantedCorpus c = planted_corpus(rng, 2, 10, 6, 5);
  const TopicModel m = fit_lda(c.docs, c.ids, opts(2, 10, 4));
  std::stringstream ss;
  write_topic_model(ss, m);
  const TopicModel back = read_topic_model(ss);
  EXPECT_TRUE(back == m);
  std::istringstream junk("not a model");
  EXPECT_THROW(read_topic_model(junk), DataError);
}
