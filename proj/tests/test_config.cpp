#include <sstream>

#include <gtest/gtest.h>

#include "graphplan/config.hpp"

using namespace graphplan;

namespace {

std::string usage_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const UsageError& e) {
    return e.what();
  }
  return "";
}

PipelineConfig parse(const std::string& text, const std::filesystem::path& base = {}) {
  std::istringstream in(text);
  return parse_config(in, base);
}

}  // namespace

TEST(Config, DefaultsValidate) {
  const PipelineConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.beam, 10);
  EXPECT_EQ(cfg.length, 5);
  EXPECT_DOUBLE_EQ(cfg.lambda, 0.5);
  EXPECT_DOUBLE_EQ(cfg.embedding_scale, 1.0);
}

TEST(Config, ParsesKeysCommentsAndBlankLines) {
  const PipelineConfig cfg = parse(
      "# comment\n\n topics = 7 \nalpha=0.25\nno_repeat = yes\nstart_mode = rank\nplan_seed = 42\n"
      "embedding_scale = 0.1\n");
  EXPECT_EQ(cfg.topics, 7);
  EXPECT_DOUBLE_EQ(cfg.alpha, 0.25);
  EXPECT_TRUE(cfg.no_repeat);
  EXPECT_EQ(cfg.start_mode, "rank");
  EXPECT_EQ(cfg.plan_seed, 42u);
  EXPECT_DOUBLE_EQ(cfg.embedding_scale, 0.1);
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_NE(usage_message([] { parse("colour = red\n"); }).find("'colour'"), std::string::npos);
  EXPECT_NE(usage_message([] { parse("beam = ten\n"); }).find("'beam'"), std::string::npos);
  EXPECT_NE(usage_message([] { parse("beam = 3x\n"); }).find("'beam'"), std::string::npos);
  EXPECT_NE(usage_message([] { parse("lda_seed = -4\n"); }).find("'lda_seed'"), std::string::npos);
  EXPECT_NE(usage_message([] { parse("strict = maybe\n"); }).find("'strict'"), std::string::npos);
  EXPECT_NE(usage_message([] { parse("topics 3\n"); }).find("line 1"), std::string::npos);
}

TEST(Config, ValidationNamesTheField) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"topics", "0"},   {"beta", "0"},    {"dim", "0"},      {"embedding_scale", "0"}, {"lr", "-1"},
      {"epochs", "-1"},  {"tau", "1.5"},   {"tau_percentile", "101"}, {"length", "0"}, {"beam", "0"},
      {"lambda", "0"},   {"lambda", "1.5"}, {"start_mode", "best"}, {"neg_per_pos", "0"},
  };
  for (const auto& [key, value] : cases) {
    PipelineConfig cfg;
    cfg.set(key, value);
    const std::string msg = usage_message([&] { cfg.validate(); });
    EXPECT_NE(msg.find(key), std::string::npos) << key << "=" << value << " gave '" << msg << "'";
  }
}

TEST(Config, BoundaryValuesAreAccepted) {
  PipelineConfig cfg;
  cfg.set("lambda", "1");
  cfg.set("tau", "0");
  cfg.set("tau_percentile", "0");
  cfg.set("epochs", "0");
  cfg.set("alpha", "0");
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, RelativePathsResolveAgainstTheFile) {
  const PipelineConfig cfg = parse("corpus = data/s.jsonl\ntitles = /abs/t.txt\nout_dir = ../out\n", "/base/dir");
  EXPECT_EQ(cfg.corpus, "/base/dir/data/s.jsonl");
  EXPECT_EQ(cfg.titles, "/abs/t.txt");
  EXPECT_EQ(cfg.out_dir, "/base/out");
  EXPECT_EQ(parse("corpus = s.jsonl\n").corpus, "s.jsonl");
}

TEST(Config, SnapshotCoversEverySetting) {
  PipelineConfig cfg;
  cfg.set("embedding_scale", "0.3");
  const auto j = cfg.snapshot();
  EXPECT_DOUBLE_EQ(j["embedding_scale"].get<double>(), 0.3);
  EXPECT_EQ(j.size(), 30u);
  for (const auto& [key, value] : j.items()) {
    PipelineConfig other;
    EXPECT_NO_THROW(other.set(key, value.is_string() ? value.get<std::string>() : value.dump())) << key;
  }
}

TEST(Config, BundledToyConfigLoads) {
  const PipelineConfig cfg = load_config(std::string(GRAPHPLAN_TOY_DIR) + "/toy.cfg");
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.topics, 3);
  EXPECT_TRUE(std::filesystem::exists(cfg.corpus)) << cfg.corpus;
  EXPECT_THROW(load_config("/nonexistent/x.cfg"), DataError);
}
