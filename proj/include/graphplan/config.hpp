#pragma once

// Pipeline configuration: a flat "key = value" text file. Blank lines and
// lines starting with '#' are ignored. Relative paths are resolved against
// the directory holding the config file. Command-line flags override file
// values through the same set() entry point, so validation is shared.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphplan/error.hpp"
#include "graphplan/text.hpp"

namespace graphplan {

struct PipelineConfig {
  // paths
  std::string corpus;
  std::string titles;  // one title per line; empty = every corpus title
  std::string templates;
  std::string out_dir = "graphplan_out";

  // extraction
  bool fallback_extractor = false;
  bool strict = false;

  // topics
  int topics = 500;
  double alpha = 0.0;  // 0 = 50 / topics
  double beta = 0.01;
  int lda_iters = 500;
  std::uint64_t lda_seed = 1;
  int min_doc_freq = 2;

  // coherence
  int dim = 64;
  int hidden = 128;
  double margin = 0.5;
  double embedding_scale = 1.0;
  double lr = 0.05;
  int epochs = 10;
  int neg_per_pos = 1;
  std::uint64_t coherence_seed = 1;
  double tau = 0.0;  // absolute threshold; 0 = use tau_percentile
  double tau_percentile = 5.0;

  // planning
  int length = 5;
  int beam = 10;
  int n_starts = 0;
  double lambda = 0.5;
  std::uint64_t plan_seed = 1;
  bool no_repeat = false;
  bool literal_decay = false;
  std::string start_mode = "sample";

  // Sets one field from its textual value, validating it. Throws UsageError
  // naming the field.
  void set(const std::string& key, const std::string& value, const std::filesystem::path& base = {}) {
    const auto& setters = table();
    auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("config: unknown key '" + key + "'");
    try {
      it->second(*this, value, base);
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("config: invalid value '" + value + "' for '" + key + "'");
    }
  }

  void validate() const {
    auto bad = [](const std::string& field, const std::string& why) {
      throw UsageError("config: " + field + " " + why);
    };
    if (topics < 1) bad("topics", "must be >= 1");
    if (alpha < 0.0) bad("alpha", "must be > 0 (or 0 for 50/topics)");
    if (!(beta > 0.0)) bad("beta", "must be > 0");
    if (lda_iters < 0) bad("lda_iters", "must be >= 0");
    if (min_doc_freq < 1) bad("min_doc_freq", "must be >= 1");
    if (dim < 1) bad("dim", "must be >= 1");
    if (hidden < 1) bad("hidden", "must be >= 1");
    if (margin < 0.0) bad("margin", "must be >= 0");
    if (!(embedding_scale > 0.0)) bad("embedding_scale", "must be > 0");
    if (!(lr > 0.0)) bad("lr", "must be > 0");
    if (epochs < 0) bad("epochs", "must be >= 0");
    if (neg_per_pos < 1) bad("neg_per_pos", "must be >= 1");
    if (tau != 0.0 && !(tau > 0.0 && tau < 1.0)) bad("tau", "must be in (0, 1)");
    if (!(tau_percentile >= 0.0 && tau_percentile <= 100.0)) bad("tau_percentile", "must be in [0, 100]");
    if (length < 1) bad("length", "must be >= 1");
    if (beam < 1) bad("beam", "must be >= 1");
    if (n_starts < 0) bad("n_starts", "must be >= 0");
    if (!(lambda > 0.0 && lambda <= 1.0)) bad("lambda", "must be in (0, 1]");
    if (start_mode != "sample" && start_mode != "rank") bad("start_mode", "must be 'sample' or 'rank'");
  }

  nlohmann::json snapshot() const {
    return nlohmann::json{
        {"corpus", corpus},
        {"titles", titles},
        {"templates", templates},
        {"out_dir", out_dir},
        {"fallback_extractor", fallback_extractor},
        {"strict", strict},
        {"topics", topics},
        {"alpha", alpha},
        {"beta", beta},
        {"lda_iters", lda_iters},
        {"lda_seed", lda_seed},
        {"min_doc_freq", min_doc_freq},
        {"dim", dim},
        {"hidden", hidden},
        {"margin", margin},
        {"embedding_scale", embedding_scale},
        {"lr", lr},
        {"epochs", epochs},
        {"neg_per_pos", neg_per_pos},
        {"coherence_seed", coherence_seed},
        {"tau", tau},
        {"tau_percentile", tau_percentile},
        {"length", length},
        {"beam", beam},
        {"n_starts", n_starts},
        {"lambda", lambda},
        {"plan_seed", plan_seed},
        {"no_repeat", no_repeat},
        {"literal_decay", literal_decay},
        {"start_mode", start_mode},
    };
  }

 private:
  using Setter = std::function<void(PipelineConfig&, const std::string&, const std::filesystem::path&)>;

  static bool parse_bool(const std::string& v) {
    const std::string s = to_lower(trim(v));
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw std::invalid_argument("not a boolean");
  }
  static int parse_int(const std::string& v) {
    std::size_t used = 0;
    const int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  }
  static std::uint64_t parse_u64(const std::string& v) {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    const auto x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  }
  static double parse_double(const std::string& v) {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  }
  static std::string resolve(const std::string& v, const std::filesystem::path& base) {
    if (v.empty() || base.empty()) return v;
    std::filesystem::path p(v);
    return p.is_absolute() ? v : (base / p).lexically_normal().string();
  }

  static const std::map<std::string, Setter>& table() {
    using P = PipelineConfig;
    using Path = std::filesystem::path;
    static const std::map<std::string, Setter> kTable{
        {"corpus", [](P& c, const std::string& v, const Path& b) { c.corpus = resolve(v, b); }},
        {"titles", [](P& c, const std::string& v, const Path& b) { c.titles = resolve(v, b); }},
        {"templates", [](P& c, const std::string& v, const Path& b) { c.templates = resolve(v, b); }},
        {"out_dir", [](P& c, const std::string& v, const Path& b) { c.out_dir = resolve(v, b); }},
        {"fallback_extractor", [](P& c, const std::string& v, const Path&) { c.fallback_extractor = parse_bool(v); }},
        {"strict", [](P& c, const std::string& v, const Path&) { c.strict = parse_bool(v); }},
        {"topics", [](P& c, const std::string& v, const Path&) { c.topics = parse_int(v); }},
        {"alpha", [](P& c, const std::string& v, const Path&) { c.alpha = parse_double(v); }},
        {"beta", [](P& c, const std::string& v, const Path&) { c.beta = parse_double(v); }},
        {"lda_iters", [](P& c, const std::string& v, const Path&) { c.lda_iters = parse_int(v); }},
        {"lda_seed", [](P& c, const std::string& v, const Path&) { c.lda_seed = parse_u64(v); }},
        {"min_doc_freq", [](P& c, const std::string& v, const Path&) { c.min_doc_freq = parse_int(v); }},
        {"dim", [](P& c, const std::string& v, const Path&) { c.dim = parse_int(v); }},
        {"hidden", [](P& c, const std::string& v, const Path&) { c.hidden = parse_int(v); }},
        {"margin", [](P& c, const std::string& v, const Path&) { c.margin = parse_double(v); }},
        {"embedding_scale", [](P& c, const std::string& v, const Path&) { c.embedding_scale = parse_double(v); }},
        {"lr", [](P& c, const std::string& v, const Path&) { c.lr = parse_double(v); }},
        {"epochs", [](P& c, const std::string& v, const Path&) { c.epochs = parse_int(v); }},
        {"neg_per_pos", [](P& c, const std::string& v, const Path&) { c.neg_per_pos = parse_int(v); }},
        {"coherence_seed", [](P& c, const std::string& v, const Path&) { c.coherence_seed = parse_u64(v); }},
        {"tau", [](P& c, const std::string& v, const Path&) { c.tau = parse_double(v); }},
        {"tau_percentile", [](P& c, const std::string& v, const Path&) { c.tau_percentile = parse_double(v); }},
        {"length", [](P& c, const std::string& v, const Path&) { c.length = parse_int(v); }},
        {"beam", [](P& c, const std::string& v, const Path&) { c.beam = parse_int(v); }},
        {"n_starts", [](P& c, const std::string& v, const Path&) { c.n_starts = parse_int(v); }},
        {"lambda", [](P& c, const std::string& v, const Path&) { c.lambda = parse_double(v); }},
        {"plan_seed", [](P& c, const std::string& v, const Path&) { c.plan_seed = parse_u64(v); }},
        {"no_repeat", [](P& c, const std::string& v, const Path&) { c.no_repeat = parse_bool(v); }},
        {"literal_decay", [](P& c, const std::string& v, const Path&) { c.literal_decay = parse_bool(v); }},
        {"start_mode", [](P& c, const std::string& v, const Path&) { c.start_mode = trim(v); }},
    };
    return kTable;
  }
};

inline PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base = {}) {
  PipelineConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)), base);
  }
  return cfg;
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  return parse_config(in, std::filesystem::path(path).parent_path());
}

}  // namespace graphplan
