#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "graphplan/event.hpp"
#include "graphplan/lexicon.hpp"
#include "graphplan/stemmer.hpp"
#include "graphplan/text.hpp"

using namespace graphplan;

TEST(Stemmer, MatchesReferenceTable) {
  std::ifstream in(std::string(GRAPHPLAN_TEST_DATA) + "/porter_reference.tsv");
  ASSERT_TRUE(in) << "missing porter_reference.tsv";
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos) << line;
    const std::string word = line.substr(0, tab);
    const std::string expected = line.substr(tab + 1);
    EXPECT_EQ(stem_token(word), expected) << "word: " << word;
    ++checked;
  }
  EXPECT_GT(checked, 250);
}

TEST(Stemmer, DocumentedExamples) {
  EXPECT_EQ(stem_token("coughing"), "cough");
  EXPECT_EQ(stem_token("go"), "go");
  EXPECT_EQ(stem_token("decided"), "decid");
}

TEST(Stemmer, NonAlphabeticInputUnchanged) {
  EXPECT_EQ(stem_token("Running"), "Running");
  EXPECT_EQ(stem_token("don't"), "don't");
  EXPECT_EQ(stem_token("42"), "42");
  EXPECT_EQ(stem_token(""), "");
}

TEST(Text, NormalizeToken) {
  EXPECT_EQ(normalize_token("Glasses."), "glasses");
  EXPECT_EQ(normalize_token("didn't"), "didn't");
  EXPECT_EQ(normalize_token("--"), "");
  EXPECT_EQ(normalize_token("\"Hello,"), "hello");
}

TEST(Text, SentenceWordsKeepOneSlotPerToken) {
  const auto w = sentence_words("She bought , new glasses.");
  ASSERT_EQ(w.size(), 5u);
  EXPECT_EQ(w[2], "");
  EXPECT_EQ(w[4], "glasses");
}

TEST(Text, ContentWordsAndSplitting) {
  EXPECT_EQ(content_words("New Glasses!"), (std::vector<std::string>{"new", "glasses"}));
  EXPECT_EQ(split("a,b,,c", ','), (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(trim("  x y \t"), "x y");
  EXPECT_EQ(join({"a", "b"}, "-"), "a-b");
}

TEST(Text, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Event, SurfaceRoundTrip) {
  for (const std::string s : {"buy", "(not)take", "take(over)", "be(excite)", "(not)decide(buy)"}) {
    const Event e = parse_event(s);
    EXPECT_EQ(e.surface(), s);
    EXPECT_EQ(parse_event(e.surface()).head, e.head);
    EXPECT_EQ(parse_event(e.surface()).modifier, e.modifier);
    EXPECT_EQ(parse_event(e.surface()).negated, e.negated);
  }
}

TEST(Event, RejectsMalformedSurfaces) {
  for (const std::string s : {"", "<SEP>", "take(over", "take()", "Take", "a b", "take(over)(up)"}) {
    EXPECT_THROW(parse_event(s), DataError) << s;
  }
}

TEST(WordNormalizer, IrregularFormsAndReadableLabels) {
  const WordNormalizer readable(true);
  const WordNormalizer raw(false);
  EXPECT_EQ(readable("took"), "take");
  EXPECT_EQ(readable("bought"), "buy");
  EXPECT_EQ(readable("decided"), "decide");
  EXPECT_EQ(raw("decided"), "decid");
  EXPECT_EQ(readable("tried"), readable("try"));
  EXPECT_EQ(readable("tried"), "try");
  EXPECT_EQ(readable("Excited"), "excite");
  EXPECT_EQ(readable("..."), "");
}

TEST(Lexicon, RegularInflections) {
  EXPECT_EQ(lexicon::regular_inflections("try"), (std::vector<std::string>{"tries", "tried", "trying"}));
  EXPECT_EQ(lexicon::regular_inflections("bake"), (std::vector<std::string>{"bakes", "baked", "baking"}));
  EXPECT_EQ(lexicon::regular_inflections("wash"), (std::vector<std::string>{"washes", "washed", "washing"}));
  EXPECT_EQ(lexicon::regular_inflections("walk"), (std::vector<std::string>{"walks", "walked", "walking"}));
}

TEST(Lexicon, PrepositionListIsTheDocumentedOne) {
  for (const char* p : {"up", "over", "out", "off", "on", "in", "down", "away", "back", "around", "through"}) {
    EXPECT_TRUE(lexicon::is_preposition(p)) << p;
  }
  EXPECT_FALSE(lexicon::is_preposition("to"));
  EXPECT_EQ(lexicon::kPrepositions.size(), 11u);
}
