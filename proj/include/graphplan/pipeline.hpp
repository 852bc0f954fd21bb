#pragma once

// Stage functions shared by the CLI subcommands and the end-to-end
// pipeline. Each stage reads and writes the documented file formats.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphplan/coherence.hpp"
#include "graphplan/config.hpp"
#include "graphplan/corpus.hpp"
#include "graphplan/error.hpp"
#include "graphplan/graph.hpp"
#include "graphplan/metrics.hpp"
#include "graphplan/planner.hpp"
#include "graphplan/realizer.hpp"
#include "graphplan/topics.hpp"

namespace graphplan {

namespace fs = std::filesystem;

inline std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a(ss.str());
  return hex.str();
}

// Provenance record written next to an artifact: the producing stage, the
// configuration snapshot and a content hash of every input file. Contains no
// timestamps so reruns are byte-identical.
inline void write_run_manifest(const fs::path& path, const std::string& stage, const nlohmann::json& config,
                               const std::vector<fs::path>& inputs) {
  nlohmann::json hashes = nlohmann::json::object();
  for (const fs::path& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(in)) {
        if (entry.is_regular_file() && entry.path().filename() != "run_manifest.json") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const fs::path& f : files) hashes[f.filename().string()] = hash_file(f);
    } else {
      hashes[in.filename().string()] = hash_file(in);
    }
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << nlohmann::json{{"stage", stage}, {"config", config}, {"inputs", hashes}}.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct ExtractStageResult {
  std::vector<EventChain> chains;
  std::size_t warnings = 0;
};

inline ExtractStageResult stage_extract(const std::string& corpus_path, const std::string& out_path,
                                        const LoadOptions& load, const ExtractOptions& extract,
                                        std::ostream& log = std::cerr) {
  LoadResult loaded = load_corpus(corpus_path, load);
  for (const std::string& w : loaded.warnings) log << "warning: " << w << '\n';
  ExtractStageResult r;
  r.warnings = loaded.warning_count;
  for (const Story& s : loaded.stories) r.chains.push_back(extract_events(s, extract));
  std::ofstream out(out_path);
  if (!out) throw DataError("cannot write chains file '" + out_path + "'");
  write_chains(out, r.chains);
  return r;
}

inline TopicModel stage_topics(const std::string& corpus_path, const std::string& out_path, const LdaOptions& lda,
                               const LdaPreprocess& pre, const LoadOptions& load, std::ostream& log = std::cerr) {
  LoadResult loaded = load_corpus(corpus_path, load);
  for (const std::string& w : loaded.warnings) log << "warning: " << w << '\n';
  if (loaded.stories.empty()) throw DataError("no stories in '" + corpus_path + "'");
  std::vector<std::string> ids;
  for (const Story& s : loaded.stories) ids.push_back(s.id);
  TopicModel m = fit_lda(lda_documents(loaded.stories, pre), ids, lda);
  save_topic_model(out_path, m);
  return m;
}

// One graph file per topic (empty topics included), the manifest, the
// story -> topic assignments and a copy of the chains the graphs came from.
inline std::vector<EventGraph> stage_build_graphs(const std::vector<EventChain>& chains, const TopicModel& lda,
                                                  const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const auto assignment = assign_story_topics(lda, chains);
  std::vector<std::vector<EventChain>> by_topic(lda.num_topics());
  for (const EventChain& c : chains) by_topic[assignment.at(c.story_id)].push_back(c);
  std::vector<EventGraph> graphs;
  GraphManifest manifest;
  for (int k = 0; k < lda.num_topics(); ++k) {
    graphs.push_back(build_graph(k, by_topic[k]));
    manifest[k] = graph_file_name(k);
    save_graph(out_dir / manifest[k], graphs.back());
  }
  save_manifest(out_dir, manifest);
  std::ofstream out(out_dir / "assignments.txt");
  if (!out) throw DataError("cannot write assignments in '" + out_dir.string() + "'");
  write_assignments(out, assignment);
  std::ofstream chains_out(out_dir / "chains.jsonl");
  if (!chains_out) throw DataError("cannot write chains in '" + out_dir.string() + "'");
  write_chains(chains_out, chains);
  return graphs;
}

inline std::map<std::string, int> load_assignments(const fs::path& graph_dir) {
  std::ifstream in(graph_dir / "assignments.txt");
  if (!in) throw DataError("cannot open '" + (graph_dir / "assignments.txt").string() + "'");
  return read_assignments(in);
}

struct CoherenceStageOptions {
  CoherenceConfig model;
  TrainOptions train;
  int neg_per_pos = 1;
};

inline CoherenceModel stage_train_coherence(CoherenceKind kind, const std::vector<EventChain>& chains,
                                            const std::map<std::string, int>& story_topic,
                                            const CoherenceStageOptions& opt, const std::string& out_path,
                                            std::ostream& log = std::cerr) {
  CoherenceModel m = init_coherence_model(kind, event_vocabulary(chains), title_vocabulary(chains), opt.model);
  const PairSampler sampler(m, chains, story_topic, opt.neg_per_pos);
  if (sampler.num_positives() == 0) throw DataError("no positive training pairs for " + std::string(kind_name(kind)));
  const TrainResult tr = train(m, [&](Rng& rng) { return sampler(rng); }, opt.train);
  for (std::size_t e = 0; e < tr.epoch_loss.size(); ++e) {
    log << kind_name(kind) << " epoch " << e + 1 << " loss " << tr.epoch_loss[e] << '\n';
  }
  save_coherence_model(out_path, m);
  return m;
}

struct ExclusiveStageOptions {
  double tau = 0.0;  // > 0 selects an absolute threshold
  double tau_percentile = 5.0;
  ExclusiveOptions candidates;
};

struct ExclusiveStageReport {
  int topic = 0;
  double tau = 0.0;
  std::size_t pairs = 0;
};

// Rewrites every graph in `graph_dir` with its derived exclusive set.
inline std::vector<ExclusiveStageReport> stage_derive_exclusive(const CoherenceModel& ee, const fs::path& graph_dir,
                                                                const ExclusiveStageOptions& opt) {
  std::vector<ExclusiveStageReport> reports;
  for (const auto& [topic, file] : load_manifest(graph_dir)) {
    EventGraph g = load_graph(graph_dir / file);
    ExclusiveStageReport r;
    r.topic = topic;
    if (g.size() >= 2) {
      r.tau = opt.tau > 0.0 ? opt.tau : tau_at_percentile(ee, g, opt.tau_percentile, opt.candidates);
      if (r.tau > 0.0 && r.tau < 1.0) {
        r.pairs = derive_exclusive(ee, g, r.tau, opt.candidates).size();
      } else {
        g.clear_exclusive();
      }
    }
    save_graph(graph_dir / file, g);
    reports.push_back(r);
  }
  return reports;
}

// Titles to plan for: one per line of `titles_path`, or every distinct
// corpus title in file order when the path is empty.
inline std::vector<std::vector<std::string>> load_titles(const std::string& titles_path, const std::string& corpus) {
  std::vector<std::vector<std::string>> titles;
  if (!titles_path.empty()) {
    std::ifstream in(titles_path);
    if (!in) throw DataError("cannot open titles file '" + titles_path + "'");
    std::string line;
    while (std::getline(in, line)) {
      auto words = content_words(line);
      if (!words.empty()) titles.push_back(std::move(words));
    }
    return titles;
  }
  std::set<std::vector<std::string>> seen;
  for (const Story& s : load_corpus(corpus).stories) {
    if (seen.insert(s.title_tokens).second) titles.push_back(s.title_tokens);
  }
  return titles;
}

// Plans every title; title i uses seed derive_seed(base.seed, i).
inline std::vector<Plan> stage_plan(const std::vector<std::vector<std::string>>& titles, const fs::path& graph_dir,
                                    const TopicModel& lda, const CoherenceModel& ee, const CoherenceModel& ie,
                                    const PlanConfig& base, bool random_walk_baseline = false) {
  const GraphManifest manifest = load_manifest(graph_dir);
  std::map<int, EventGraph> cache;
  std::vector<Plan> plans;
  SelectOptions sel;
  sel.skip_empty = true;
  for (std::size_t i = 0; i < titles.size(); ++i) {
    const std::vector<double> theta = infer_topic(lda, titles[i], sel.infer);
    // Same walk as select_graph with skip_empty, over a per-run graph cache.
    int chosen = -1;
    std::vector<int> order(theta.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return theta[a] > theta[b]; });
    for (int k : order) {
      auto it = manifest.find(k);
      if (it == manifest.end()) continue;
      if (!cache.count(k)) cache.emplace(k, load_graph(graph_dir / it->second));
      if (!cache.at(k).empty()) {
        chosen = k;
        break;
      }
    }
    if (chosen < 0) throw DataError("no non-empty graph in '" + graph_dir.string() + "'");
    PlanConfig cfg = base;
    cfg.seed = derive_seed(base.seed, i);
    const EventGraph& g = cache.at(chosen);
    plans.push_back(random_walk_baseline ? random_walk(g, titles[i], cfg) : plan_beam(g, ee, ie, titles[i], cfg));
  }
  return plans;
}

inline PlanConfig plan_config_from(const PipelineConfig& c) {
  PlanConfig p;
  p.length = c.length;
  p.beam = c.beam;
  p.n_starts = c.n_starts;
  p.lambda = c.lambda;
  p.seed = c.plan_seed;
  p.no_repeat = c.no_repeat;
  p.literal_decay = c.literal_decay;
  p.start_mode = c.start_mode == "rank" ? StartMode::kRankByInput : StartMode::kSample;
  return p;
}

struct PipelinePaths {
  fs::path dir;
  fs::path chains() const { return dir / "chains.jsonl"; }
  fs::path lda() const { return dir / "model.lda"; }
  fs::path graphs() const { return dir / "graphs"; }
  fs::path ee() const { return dir / "ee.coh"; }
  fs::path ie() const { return dir / "ie.coh"; }
  fs::path plans() const { return dir / "plans.jsonl"; }
  fs::path stories() const { return dir / "stories.txt"; }
  fs::path manifest() const { return dir / "run_manifest.json"; }
};

struct PipelineResult {
  PipelinePaths paths;
  std::vector<Plan> plans;
};

// extract -> topics -> build-graphs -> train-coherence (x2) -> derive-exclusive -> plan
inline PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream& log = std::cerr) {
  cfg.validate();
  if (cfg.corpus.empty()) throw UsageError("config: corpus is required");
  PipelineResult result;
  result.paths.dir = cfg.out_dir;
  const PipelinePaths& p = result.paths;
  fs::create_directories(p.dir);

  const LoadOptions load{cfg.strict, true};
  ExtractOptions ex;
  ex.fallback_extractor = cfg.fallback_extractor;
  const auto extracted = stage_extract(cfg.corpus, p.chains().string(), load, ex, log);
  log << "extract: " << extracted.chains.size() << " chains, " << extracted.warnings << " warnings\n";

  LdaOptions lda_opt;
  lda_opt.topics = cfg.topics;
  lda_opt.alpha = cfg.alpha;
  lda_opt.beta = cfg.beta;
  lda_opt.iterations = cfg.lda_iters;
  lda_opt.seed = cfg.lda_seed;
  LdaPreprocess pre;
  pre.min_doc_freq = cfg.min_doc_freq;
  const TopicModel lda = stage_topics(cfg.corpus, p.lda().string(), lda_opt, pre, load, log);
  log << "topics: K=" << lda.num_topics() << " V=" << lda.vocab_size() << '\n';

  const auto graphs = stage_build_graphs(extracted.chains, lda, p.graphs());
  log << "build-graphs: " << graphs.size() << " graphs\n";

  CoherenceStageOptions co;
  co.model = CoherenceConfig{cfg.dim, cfg.hidden, cfg.margin, cfg.coherence_seed, cfg.embedding_scale};
  co.train = TrainOptions{cfg.epochs, cfg.lr, derive_seed(cfg.coherence_seed, 1)};
  co.neg_per_pos = cfg.neg_per_pos;
  const auto assignment = load_assignments(p.graphs());
  const CoherenceModel ee =
      stage_train_coherence(CoherenceKind::kEventEvent, extracted.chains, assignment, co, p.ee().string(), log);
  co.model.seed = derive_seed(cfg.coherence_seed, 2);
  co.train.seed = derive_seed(cfg.coherence_seed, 3);
  const CoherenceModel ie =
      stage_train_coherence(CoherenceKind::kInputEvent, extracted.chains, assignment, co, p.ie().string(), log);

  ExclusiveStageOptions xo;
  xo.tau = cfg.tau;
  xo.tau_percentile = cfg.tau_percentile;
  xo.candidates.seed = cfg.coherence_seed;
  for (const auto& r : stage_derive_exclusive(ee, p.graphs(), xo)) {
    log << "derive-exclusive: topic " << r.topic << " tau " << r.tau << " pairs " << r.pairs << '\n';
  }

  const auto titles = load_titles(cfg.titles, cfg.corpus);
  result.plans = stage_plan(titles, p.graphs(), lda, ee, ie, plan_config_from(cfg));
  {
    std::ofstream out(p.plans());
    if (!out) throw DataError("cannot write '" + p.plans().string() + "'");
    write_plans(out, result.plans);
  }
  log << "plan: " << result.plans.size() << " plans\n";

  if (!cfg.templates.empty()) {
    const TemplateSet templates = load_templates(cfg.templates);
    std::ofstream out(p.stories());
    for (const Plan& plan : result.plans) {
      if (plan.events.empty()) continue;
      out << join(plan.input, " ") << '\n';
      for (const std::string& s : realize(plan, templates)) out << "  " << s << '\n';
    }
  }

  std::vector<fs::path> inputs{cfg.corpus};
  if (!cfg.titles.empty()) inputs.emplace_back(cfg.titles);
  if (!cfg.templates.empty()) inputs.emplace_back(cfg.templates);
  write_run_manifest(p.manifest(), "pipeline", cfg.snapshot(), inputs);
  return result;
}

}  // namespace graphplan
