// graphplan: command-line entry point for every pipeline stage.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric/model error.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "graphplan/graphplan.hpp"

namespace fs = std::filesystem;
using namespace graphplan;

namespace {

void stamp(const std::string& artifact, const std::string& stage, const nlohmann::json& config,
           const std::vector<fs::path>& inputs) {
  fs::path p(artifact);
  const fs::path manifest = fs::is_directory(p) ? p / "run_manifest.json" : fs::path(artifact + ".manifest.json");
  write_run_manifest(manifest, stage, config, inputs);
}

// Output stream that is either a file or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw DataError("cannot write '" + path + "'");
    }
  }
  std::ostream& get() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

CoherenceKind parse_kind(const std::string& s) {
  if (s == "event") return CoherenceKind::kEventEvent;
  if (s == "input") return CoherenceKind::kInputEvent;
  throw UsageError("--kind must be 'event' or 'input'");
}

struct PlanArgs {
  std::string title, titles, graphs, lda, ee, ie, out = "-", prefix, start_mode = "sample";
  PlanConfig cfg;
};

void add_plan_flags(CLI::App* cmd, PlanArgs& a, bool beam) {
  cmd->add_option("--title", a.title, "Title text");
  cmd->add_option("--titles", a.titles, "File with one title per line");
  cmd->add_option("--graphs", a.graphs, "Graph directory")->required();
  cmd->add_option("--lda", a.lda, "Topic model checkpoint")->required();
  cmd->add_option("--length", a.cfg.length, "Plan length")->capture_default_str();
  cmd->add_option("--seed", a.cfg.seed, "Random seed")->capture_default_str();
  cmd->add_flag("--no-repeat", a.cfg.no_repeat, "Forbid repeated events");
  cmd->add_option("--prefix", a.prefix, "Comma-separated pinned leading events");
  cmd->add_option("--out", a.out, "Plan file (default stdout)");
  if (beam) {
    cmd->add_option("--ee", a.ee, "Event-event coherence model")->required();
    cmd->add_option("--ie", a.ie, "Input-event coherence model")->required();
    cmd->add_option("--beam", a.cfg.beam, "Beam width")->capture_default_str();
    cmd->add_option("--n-starts", a.cfg.n_starts, "Start events (0 = beam)")->capture_default_str();
    cmd->add_option("--lambda", a.cfg.lambda, "Decay rate")->capture_default_str();
    cmd->add_flag("--literal-decay", a.cfg.literal_decay, "Weight early events most");
    cmd->add_option("--start-mode", a.start_mode, "sample | rank")->capture_default_str();
  } else {
    cmd->add_option("--restarts", a.cfg.walk_restarts, "Restarts after a dead end")->capture_default_str();
  }
}

int run_plan(const PlanArgs& a, bool beam) {
  if (a.title.empty() == a.titles.empty()) throw UsageError("give exactly one of --title or --titles");
  PlanConfig cfg = a.cfg;
  if (!a.prefix.empty()) {
    for (const std::string& e : split(a.prefix, ',')) cfg.prefix.push_back(trim(e));
  }
  if (a.start_mode == "rank") {
    cfg.start_mode = StartMode::kRankByInput;
  } else if (a.start_mode != "sample") {
    throw UsageError("--start-mode must be 'sample' or 'rank'");
  }
  cfg.validate();

  std::vector<std::vector<std::string>> titles;
  if (!a.title.empty()) {
    titles.push_back(content_words(a.title));
  } else {
    titles = load_titles(a.titles, "");
  }
  const TopicModel lda = load_topic_model(a.lda);
  std::optional<CoherenceModel> ee, ie;
  if (beam) {
    ee = load_coherence_model(a.ee);
    ie = load_coherence_model(a.ie);
  }
  const CoherenceModel none;
  const auto plans = stage_plan(titles, a.graphs, lda, beam ? *ee : none, beam ? *ie : none, cfg, !beam);
  Output out(a.out);
  write_plans(out.get(), plans);
  if (a.out != "-") {
    std::vector<fs::path> inputs{a.lda, a.graphs};
    if (beam) {
      inputs.emplace_back(a.ee);
      inputs.emplace_back(a.ie);
    }
    if (!a.titles.empty()) inputs.emplace_back(a.titles);
    nlohmann::json snap = plan_to_json(plans.front())["config"];
    snap["seed"] = cfg.seed;
    stamp(a.out, beam ? "plan" : "walk", snap, inputs);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GraphPlan: plan storylines over per-topic event graphs"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // extract
  std::string x_corpus, x_out;
  bool x_fallback = false, x_strict = false;
  auto* extract = app.add_subcommand("extract", "Extract event chains from a corpus");
  extract->add_option("--corpus", x_corpus, "Corpus JSONL")->required();
  extract->add_option("--out", x_out, "Chains JSONL")->required();
  extract->add_flag("--fallback-extractor", x_fallback, "Use the lexicon extractor for stories without frames");
  extract->add_flag("--strict", x_strict, "Fail on the first malformed record");

  // topics
  std::string t_corpus, t_out;
  LdaOptions t_lda;
  LdaPreprocess t_pre;
  bool t_keep_stop = false;
  auto* topics = app.add_subcommand("topics", "Fit the LDA topic model");
  topics->add_option("--corpus", t_corpus, "Corpus JSONL")->required();
  topics->add_option("--out", t_out, "Model checkpoint")->required();
  topics->add_option("--k", t_lda.topics, "Number of topics")->capture_default_str();
  topics->add_option("--iters", t_lda.iterations, "Gibbs sweeps")->capture_default_str();
  topics->add_option("--seed", t_lda.seed, "Random seed")->capture_default_str();
  topics->add_option("--alpha", t_lda.alpha, "Doc-topic prior (default 50/K)");
  topics->add_option("--beta", t_lda.beta, "Topic-word prior")->capture_default_str();
  topics->add_option("--min-doc-freq", t_pre.min_doc_freq, "Drop rarer words")->capture_default_str();
  topics->add_flag("--keep-stopwords", t_keep_stop, "Do not remove stopwords");

  // build-graphs
  std::string b_chains, b_topics, b_out;
  auto* build = app.add_subcommand("build-graphs", "Build one event graph per topic");
  build->add_option("--chains", b_chains, "Chains JSONL")->required();
  build->add_option("--topics", b_topics, "Topic model checkpoint")->required();
  build->add_option("--out", b_out, "Output directory")->required();

  // train-coherence
  std::string c_kind, c_graphs, c_chains, c_out;
  CoherenceStageOptions c_opt;
  auto* trainc = app.add_subcommand("train-coherence", "Train a coherence model");
  trainc->add_option("--kind", c_kind, "event | input")->required();
  trainc->add_option("--graphs", c_graphs, "Graph directory (chains and topic assignments)")->required();
  trainc->add_option("--chains", c_chains, "Chains JSONL (default: the copy in --graphs)");
  trainc->add_option("--epochs", c_opt.train.epochs, "Epochs")->capture_default_str();
  trainc->add_option("--lr", c_opt.train.lr, "Learning rate")->capture_default_str();
  trainc->add_option("--seed", c_opt.model.seed, "Random seed")->capture_default_str();
  trainc->add_option("--dim", c_opt.model.dim, "Embedding size")->capture_default_str();
  trainc->add_option("--hidden", c_opt.model.hidden, "Hidden size")->capture_default_str();
  trainc->add_option("--margin", c_opt.model.margin, "Hinge margin")->capture_default_str();
  trainc->add_option("--embedding-scale", c_opt.model.embedding_scale, "Half-width of the uniform embedding init")
      ->capture_default_str();
  trainc->add_option("--neg-per-pos", c_opt.neg_per_pos, "Negatives per positive")->capture_default_str();
  trainc->add_option("--out", c_out, "Model checkpoint")->required();

  // derive-exclusive
  std::string d_model, d_graphs;
  ExclusiveStageOptions d_opt;
  auto* derive = app.add_subcommand("derive-exclusive", "Derive mutually exclusive event pairs");
  derive->add_option("--model", d_model, "Event-event coherence model")->required();
  derive->add_option("--graphs", d_graphs, "Graph directory (rewritten in place)")->required();
  derive->add_option("--tau-percentile", d_opt.tau_percentile, "Per-graph percentile of pair scores")
      ->capture_default_str();
  derive->add_option("--tau", d_opt.tau, "Absolute threshold in (0,1); overrides the percentile");
  derive->add_option("--max-pairs", d_opt.candidates.max_pairs, "Pair sample cap")->capture_default_str();
  derive->add_option("--seed", d_opt.candidates.seed, "Seed for pair sampling")->capture_default_str();

  // plan / walk
  PlanArgs p_args, w_args;
  auto* plan = app.add_subcommand("plan", "Plan storylines by beam search");
  add_plan_flags(plan, p_args, true);
  auto* walk = app.add_subcommand("walk", "Random-walk baseline plans");
  add_plan_flags(walk, w_args, false);

  // eval-diversity
  std::string e_plans, e_out;
  bool e_per_seq = false;
  auto* evald = app.add_subcommand("eval-diversity", "Dist-1 / Dist-2 over plans");
  evald->add_option("--plans", e_plans, "Plan file")->required();
  evald->add_flag("--per-sequence", e_per_seq, "Average per-plan scores instead of pooling");
  evald->add_option("--out", e_out, "Write the report record here too");

  // stats
  std::string s_graphs;
  int s_length = 5;
  std::uint64_t s_limit = 1000000;
  auto* stats = app.add_subcommand("stats", "Per-topic graph statistics");
  stats->add_option("--graphs", s_graphs, "Graph directory")->required();
  stats->add_option("--length", s_length, "Sequence length for counting")->capture_default_str();
  stats->add_option("--limit", s_limit, "Saturation limit for counting")->capture_default_str();

  // realize
  std::string r_plans, r_templates, r_out = "-";
  auto* realize_cmd = app.add_subcommand("realize", "Template realization of plans");
  realize_cmd->add_option("--plans", r_plans, "Plan file")->required();
  realize_cmd->add_option("--templates", r_templates, "Template JSON")->required();
  realize_cmd->add_option("--out", r_out, "Output text (default stdout)");

  // export
  std::string o_plans, o_out = "-";
  double o_rate = 0.0;
  std::uint64_t o_seed = 1;
  auto* exportc = app.add_subcommand("export", "Export plans as language-model prompts");
  exportc->add_option("--plans", o_plans, "Plan file")->required();
  exportc->add_option("--mask-rate", o_rate, "Per-event mask probability")->capture_default_str();
  exportc->add_option("--seed", o_seed, "Mask seed")->capture_default_str();
  exportc->add_option("--out", o_out, "Prompt file (default stdout)");

  // pipeline
  std::string pl_config, pl_out_dir;
  std::vector<std::string> pl_set;
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage from a config file");
  pipeline->add_option("--config", pl_config, "Config file")->required();
  pipeline->add_option("--out-dir", pl_out_dir, "Override out_dir");
  pipeline->add_option("--set", pl_set, "Override any config key: key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (app.get_subcommands().empty()) std::cerr << app.help();
    return static_cast<int>(ExitCode::kUsage);
  }

  try {
    if (*extract) {
      ExtractOptions opt;
      opt.fallback_extractor = x_fallback;
      const auto r = stage_extract(x_corpus, x_out, LoadOptions{x_strict, true}, opt);
      std::cerr << "extracted " << r.chains.size() << " chains (" << r.warnings << " warnings)\n";
      stamp(x_out, "extract", {{"fallback_extractor", x_fallback}, {"strict", x_strict}}, {x_corpus});
    } else if (*topics) {
      t_pre.remove_stopwords = !t_keep_stop;
      if (t_lda.topics < 1) throw UsageError("--k must be >= 1");
      if (t_lda.iterations < 0) throw UsageError("--iters must be >= 0");
      if (!(t_lda.beta > 0.0)) throw UsageError("--beta must be > 0");
      if (t_pre.min_doc_freq < 1) throw UsageError("--min-doc-freq must be >= 1");
      const TopicModel m = stage_topics(t_corpus, t_out, t_lda, t_pre, LoadOptions{});
      std::cerr << "fit K=" << m.num_topics() << " over " << m.num_docs() << " docs, V=" << m.vocab_size() << '\n';
      stamp(t_out, "topics",
            {{"k", t_lda.topics},
             {"iters", t_lda.iterations},
             {"seed", t_lda.seed},
             {"alpha", t_lda.alpha},
             {"beta", t_lda.beta},
             {"min_doc_freq", t_pre.min_doc_freq},
             {"remove_stopwords", t_pre.remove_stopwords}},
            {t_corpus});
    } else if (*build) {
      const auto graphs = stage_build_graphs(read_chains(b_chains), load_topic_model(b_topics), b_out);
      std::cerr << "wrote " << graphs.size() << " graphs to " << b_out << '\n';
      stamp(b_out, "build-graphs", nlohmann::json::object(), {b_chains, b_topics});
    } else if (*trainc) {
      const CoherenceKind kind = parse_kind(c_kind);
      if (c_opt.train.epochs < 0) throw UsageError("--epochs must be >= 0");
      if (!(c_opt.train.lr > 0.0)) throw UsageError("--lr must be > 0");
      if (c_opt.model.dim < 1 || c_opt.model.hidden < 1) throw UsageError("--dim and --hidden must be >= 1");
      if (c_opt.model.margin < 0.0) throw UsageError("--margin must be >= 0");
      if (c_opt.neg_per_pos < 1) throw UsageError("--neg-per-pos must be >= 1");
      if (!(c_opt.model.embedding_scale > 0.0)) throw UsageError("--embedding-scale must be > 0");
      const fs::path chains_path = c_chains.empty() ? fs::path(c_graphs) / "chains.jsonl" : fs::path(c_chains);
      c_opt.train.seed = derive_seed(c_opt.model.seed, 1);
      stage_train_coherence(kind, read_chains(chains_path.string()), load_assignments(c_graphs), c_opt, c_out);
      stamp(c_out, "train-coherence",
            {{"kind", c_kind},
             {"epochs", c_opt.train.epochs},
             {"lr", c_opt.train.lr},
             {"seed", c_opt.model.seed},
             {"dim", c_opt.model.dim},
             {"hidden", c_opt.model.hidden},
             {"margin", c_opt.model.margin},
             {"embedding_scale", c_opt.model.embedding_scale},
             {"neg_per_pos", c_opt.neg_per_pos}},
            {chains_path, fs::path(c_graphs) / "assignments.txt"});
    } else if (*derive) {
      if (d_opt.tau != 0.0 && !(d_opt.tau > 0.0 && d_opt.tau < 1.0)) throw UsageError("--tau must be in (0, 1)");
      if (!(d_opt.tau_percentile >= 0.0 && d_opt.tau_percentile <= 100.0)) {
        throw UsageError("--tau-percentile must be in [0, 100]");
      }
      const CoherenceModel ee = load_coherence_model(d_model);
      if (ee.kind != CoherenceKind::kEventEvent) throw ModelError("'" + d_model + "' is not an event-event model");
      for (const auto& r : stage_derive_exclusive(ee, d_graphs, d_opt)) {
        std::cout << "topic " << r.topic << " tau " << r.tau << " exclusive " << r.pairs << '\n';
      }
      stamp(d_graphs, "derive-exclusive",
            {{"tau", d_opt.tau}, {"tau_percentile", d_opt.tau_percentile}, {"seed", d_opt.candidates.seed}},
            {d_model});
    } else if (*plan) {
      return run_plan(p_args, true);
    } else if (*walk) {
      return run_plan(w_args, false);
    } else if (*evald) {
      const DiversityReport r = diversity_report(read_plans(e_plans), e_per_seq);
      std::cout << std::fixed << std::setprecision(4) << "sequences " << r.n_sequences << "\ndist-1 " << r.dist1
                << "\ndist-2 " << r.dist2 << '\n';
      if (!e_out.empty()) {
        std::ofstream out(e_out);
        if (!out) throw DataError("cannot write '" + e_out + "'");
        out << report_to_json(r).dump() << '\n';
      }
    } else if (*stats) {
      std::cout << "topic\tnodes\tedges\tmean_out_degree\tstarts\texclusive\tsequences\n";
      for (const EventGraph& g : load_graphs(s_graphs)) {
        const GraphStats st = graph_stats(g);
        const std::uint64_t seqs = g.empty() ? 0 : count_sequences(g, s_length, s_limit);
        std::cout << g.topic_id() << '\t' << st.nodes << '\t' << st.edges << '\t' << std::fixed
                  << std::setprecision(3) << st.mean_out_degree << '\t' << st.start_events << '\t'
                  << st.exclusive_pairs << '\t' << seqs << (seqs >= s_limit ? "+" : "") << '\n';
      }
    } else if (*realize_cmd) {
      const TemplateSet templates = load_templates(r_templates);
      Output out(r_out);
      for (const Plan& p : read_plans(r_plans)) {
        out.get() << join(p.input, " ") << '\n';
        if (p.events.empty()) {
          out.get() << "  (no plan)\n";
          continue;
        }
        for (const std::string& s : realize(p, templates)) out.get() << "  " << s << '\n';
      }
    } else if (*exportc) {
      if (o_rate < 0.0 || o_rate > 1.0) throw UsageError("--mask-rate must be in [0, 1]");
      Rng rng(o_seed);
      Output out(o_out);
      for (const Plan& p : read_plans(o_plans)) {
        if (p.events.empty()) continue;
        out.get() << export_prompt(p.input, p.events, &rng, o_rate) << '\n';
      }
      if (o_out != "-") stamp(o_out, "export", {{"mask_rate", o_rate}, {"seed", o_seed}}, {o_plans});
    } else if (*pipeline) {
      PipelineConfig cfg = load_config(pl_config);
      if (!pl_out_dir.empty()) cfg.out_dir = pl_out_dir;
      for (const std::string& kv : pl_set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
        cfg.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
      }
      const PipelineResult r = run_pipeline(cfg);
      std::cout << r.plans.size() << " plans written to " << r.paths.plans().string() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kData);
  }
  return 0;
}
