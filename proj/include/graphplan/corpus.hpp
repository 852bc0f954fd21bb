#pragma once

// Story loading and verb-phrase event extraction.
//
// Corpus records are one JSON object per line:
//   {"id": "s1", "title": "New glasses", "sentences": ["...", ...],
//    "frames": [[{"verb": "take", "verb_index": 2,
//                 "args": [{"role": "AM-NEG", "first": 1, "last": 1}]}], ...]}
// `frames` is optional; when present it holds one list per sentence and all
// offsets index the whitespace-split tokens of that sentence.

#include <algorithm>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphplan/error.hpp"
#include "graphplan/event.hpp"
#include "graphplan/lexicon.hpp"
#include "graphplan/text.hpp"

namespace graphplan {

struct FrameArg {
  std::string role;
  int first = 0;
  int last = 0;
};

struct Frame {
  std::string verb;
  int verb_index = 0;
  std::vector<FrameArg> args;

  bool has_role(std::string_view role) const {
    return std::any_of(args.begin(), args.end(), [&](const FrameArg& a) { return a.role == role; });
  }
  const FrameArg* find_role(std::string_view role) const {
    for (const FrameArg& a : args) {
      if (a.role == role) return &a;
    }
    return nullptr;
  }
};

struct Story {
  std::string id;
  std::vector<std::string> title_tokens;
  std::vector<std::string> sentences;
  std::optional<std::vector<std::vector<Frame>>> frames;
};

struct EventChain {
  std::string story_id;
  std::vector<std::string> title_tokens;
  std::vector<Event> events;
};

struct LoadOptions {
  bool strict = false;
  bool require_title = true;
};

struct LoadResult {
  std::vector<Story> stories;
  std::size_t warning_count = 0;
  std::vector<std::string> warnings;
};

namespace corpus_detail {

inline Story story_from_json(const nlohmann::json& j, bool require_title) {
  if (!j.is_object()) throw DataError("record is not an object");
  Story s;
  if (!j.contains("id") || !j["id"].is_string()) throw DataError("missing string field 'id'");
  s.id = j["id"].get<std::string>();
  if (s.id.empty() || std::any_of(s.id.begin(), s.id.end(), [](unsigned char c) { return std::isspace(c); })) {
    throw DataError("field 'id' must be non-empty without whitespace");
  }
  if (j.contains("title")) {
    if (!j["title"].is_string()) throw DataError("field 'title' must be a string");
    s.title_tokens = content_words(j["title"].get<std::string>());
  }
  if (require_title && s.title_tokens.empty()) throw DataError("missing title");
  if (!j.contains("sentences") || !j["sentences"].is_array() || j["sentences"].empty()) {
    throw DataError("field 'sentences' must be a non-empty array");
  }
  for (const auto& sent : j["sentences"]) {
    if (!sent.is_string()) throw DataError("sentences must be strings");
    s.sentences.push_back(sent.get<std::string>());
  }
  if (j.contains("frames") && !j["frames"].is_null()) {
    const auto& fr = j["frames"];
    if (!fr.is_array() || fr.size() != s.sentences.size()) {
      throw DataError("field 'frames' must hold one list per sentence");
    }
    std::vector<std::vector<Frame>> frames;
    for (std::size_t si = 0; si < fr.size(); ++si) {
      const int n_tokens = static_cast<int>(split_whitespace(s.sentences[si]).size());
      std::vector<Frame> sentence_frames;
      for (const auto& f : fr[si]) {
        Frame frame;
        frame.verb = f.at("verb").get<std::string>();
        frame.verb_index = f.at("verb_index").get<int>();
        if (frame.verb_index < 0 || frame.verb_index >= n_tokens) {
          throw DataError("frame verb_index out of sentence range");
        }
        if (f.contains("args")) {
          for (const auto& a : f["args"]) {
            FrameArg arg{a.at("role").get<std::string>(), a.at("first").get<int>(),
                         a.at("last").get<int>()};
            if (arg.first < 0 || arg.last < arg.first || arg.last >= n_tokens) {
              throw DataError("frame argument span out of sentence range");
            }
            frame.args.push_back(std::move(arg));
          }
        }
        sentence_frames.push_back(std::move(frame));
      }
      frames.push_back(std::move(sentence_frames));
    }
    s.frames = std::move(frames);
  }
  return s;
}

}  // namespace corpus_detail

// Parses one corpus record. Throws DataError on malformed input.
inline Story parse_story(const std::string& line, bool require_title = true) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return corpus_detail::story_from_json(j, require_title);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad field: ") + e.what());
  }
}

inline LoadResult load_corpus(std::istream& in, const LoadOptions& options = {}) {
  LoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      result.stories.push_back(parse_story(line, options.require_title));
    } catch (const DataError& e) {
      const std::string msg = "line " + std::to_string(line_no) + ": " + e.what();
      if (options.strict) throw DataError(msg);
      ++result.warning_count;
      result.warnings.push_back(msg);
    }
  }
  return result;
}

inline LoadResult load_corpus(const std::string& path, const LoadOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file '" + path + "'");
  return load_corpus(in, options);
}

// ---------------------------------------------------------------------------
// Extraction

enum class RuleKind { kBare, kPreposition, kPredicate, kCombination, kDropped };

inline std::string_view rule_name(RuleKind r) {
  switch (r) {
    case RuleKind::kBare: return "bare";
    case RuleKind::kPreposition: return "preposition";
    case RuleKind::kPredicate: return "predicate";
    case RuleKind::kCombination: return "combination";
    case RuleKind::kDropped: return "dropped";
  }
  return "?";
}

struct ExtractedEvent {
  std::optional<Event> event;  // empty for kDropped
  RuleKind rule = RuleKind::kBare;
  int frames_consumed = 1;
  std::size_t sentence = 0;
  int token = 0;
};

struct ExtractOptions {
  bool fallback_extractor = false;
  // Maximum token distance between two verbs merged into head(second).
  int combine_window = 5;
  bool readable_labels = true;
};

// Naive frame builder for stories without SRL output: closed verb lexicon,
// negation words in the two preceding tokens, copula + predicate-word
// patterns for secondary predicates.
inline std::vector<Frame> fallback_frames(const std::string& sentence) {
  const std::vector<std::string> words = sentence_words(sentence);
  const auto& aux = lexicon::auxiliaries();
  const auto& cop = lexicon::copulas();
  const auto& intens = lexicon::intensifiers();
  const auto& irregular = lexicon::irregular_forms();
  const WordNormalizer norm(true);

  auto is_verb = [&](const std::string& w) {
    if (w.empty() || !is_alpha_word(w)) return false;
    if (lexicon::is_preposition(w)) return false;
    if (irregular.count(w)) return true;
    return lexicon::is_verb_lemma(norm(w));
  };
  auto predicate_at = [&](int k) -> int {
    // index of the predicate word after an optional intensifier, or -1
    for (int j = k + 1; j < static_cast<int>(words.size()) && j <= k + 2; ++j) {
      const std::string& w = words[j];
      if (intens.count(w)) continue;
      if (lexicon::is_predicate_word(w)) return j;
      if (w.size() > 3 && w.substr(w.size() - 2) == "ed" && is_verb(w)) return j;
      return -1;
    }
    return -1;
  };

  std::vector<Frame> frames;
  std::vector<bool> taken(words.size(), false);
  for (int k = 0; k < static_cast<int>(words.size()); ++k) {
    if (taken[k]) continue;
    const std::string& w = words[k];
    Frame f;
    f.verb = w;
    f.verb_index = k;
    if (cop.count(w)) {
      const int p = predicate_at(k);
      if (p >= 0) {
        f.args.push_back({"AM-PRD", p, p});
        taken[p] = true;
      } else if (aux.count(w)) {
        continue;
      }
    } else if (aux.count(w) || !is_verb(w)) {
      continue;
    }
    for (int j = std::max(0, k - 2); j < k; ++j) {
      if (lexicon::is_negation(words[j])) {
        f.args.push_back({"AM-NEG", j, j});
        break;
      }
    }
    taken[k] = true;
    frames.push_back(std::move(f));
  }
  return frames;
}

namespace corpus_detail {

// Head word of a predicate argument span: the last alphabetic token.
inline std::string span_head(const std::vector<std::string>& words, const FrameArg& arg) {
  for (int i = arg.last; i >= arg.first; --i) {
    if (i >= 0 && i < static_cast<int>(words.size()) && is_alpha_word(words[i])) return words[i];
  }
  return {};
}

}  // namespace corpus_detail

// Applies the event rules to the frames of one sentence, in verb order:
//   predicate:   frame with AM-PRD          -> be(pred)
//   combination: next verb within window    -> first(second), both consumed
//   preposition: verb directly before a particle -> verb(particle)
//   bare:        otherwise                  -> verb
// AM-NEG on any consumed frame marks the event negated.
inline std::vector<ExtractedEvent> extract_sentence(const std::string& sentence,
                                                    std::vector<Frame> frames,
                                                    std::size_t sentence_index,
                                                    const ExtractOptions& options) {
  const std::vector<std::string> words = sentence_words(sentence);
  const WordNormalizer norm(options.readable_labels);
  std::stable_sort(frames.begin(), frames.end(),
                   [](const Frame& a, const Frame& b) { return a.verb_index < b.verb_index; });

  std::vector<ExtractedEvent> out;
  std::vector<bool> consumed(frames.size(), false);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (consumed[i]) continue;
    consumed[i] = true;
    const Frame& f = frames[i];
    ExtractedEvent ev;
    ev.sentence = sentence_index;
    ev.token = f.verb_index;
    const std::string head = norm(f.verb);
    if (head.empty()) {
      ev.rule = RuleKind::kDropped;
      out.push_back(std::move(ev));
      continue;
    }
    Event e;
    e.negated = f.has_role("AM-NEG");

    if (const FrameArg* prd = f.find_role("AM-PRD")) {
      const std::string pred = norm(corpus_detail::span_head(words, *prd));
      if (!pred.empty()) {
        e.head = "be";
        e.modifier = pred;
        ev.rule = RuleKind::kPredicate;
        ev.event = std::move(e);
        out.push_back(std::move(ev));
        continue;
      }
    }

    std::size_t partner = frames.size();
    for (std::size_t j = i + 1; j < frames.size(); ++j) {
      if (consumed[j]) continue;
      const int dist = frames[j].verb_index - f.verb_index;
      if (dist >= 1 && dist <= options.combine_window && !frames[j].has_role("AM-PRD") &&
          !norm(frames[j].verb).empty()) {
        partner = j;
      }
      break;
    }
    if (partner < frames.size()) {
      consumed[partner] = true;
      e.head = head;
      e.modifier = norm(frames[partner].verb);
      e.negated = e.negated || frames[partner].has_role("AM-NEG");
      ev.rule = RuleKind::kCombination;
      ev.frames_consumed = 2;
    } else {
      e.head = head;
      const int next = f.verb_index + 1;
      if (next < static_cast<int>(words.size()) && lexicon::is_preposition(words[next])) {
        e.modifier = words[next];
        ev.rule = RuleKind::kPreposition;
      } else {
        ev.rule = RuleKind::kBare;
      }
    }
    ev.event = std::move(e);
    out.push_back(std::move(ev));
  }
  return out;
}

// Every frame of the story with the rule that consumed it, in text order.
inline std::vector<ExtractedEvent> extract_events_traced(const Story& story,
                                                         const ExtractOptions& options = {}) {
  if (!story.frames && !options.fallback_extractor) {
    throw DataError("story '" + story.id + "': no extraction source");
  }
  std::vector<ExtractedEvent> all;
  for (std::size_t si = 0; si < story.sentences.size(); ++si) {
    std::vector<Frame> frames =
        story.frames ? (*story.frames)[si] : fallback_frames(story.sentences[si]);
    auto part = extract_sentence(story.sentences[si], std::move(frames), si, options);
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

inline EventChain extract_events(const Story& story, const ExtractOptions& options = {}) {
  EventChain chain{story.id, story.title_tokens, {}};
  for (ExtractedEvent& ev : extract_events_traced(story, options)) {
    if (ev.event) chain.events.push_back(std::move(*ev.event));
  }
  return chain;
}

// ---------------------------------------------------------------------------
// Chain files: {"story_id": "...", "title": ["new", "glasses"], "events": ["buy", ...]}

inline nlohmann::json chain_to_json(const EventChain& c) {
  return nlohmann::json{{"story_id", c.story_id}, {"title", c.title_tokens}, {"events", surfaces(c.events)}};
}

inline void write_chains(std::ostream& out, const std::vector<EventChain>& chains) {
  for (const EventChain& c : chains) out << chain_to_json(c).dump() << '\n';
}

inline std::vector<EventChain> read_chains(std::istream& in) {
  std::vector<EventChain> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      EventChain c;
      c.story_id = j.at("story_id").get<std::string>();
      if (j.contains("title")) c.title_tokens = j["title"].get<std::vector<std::string>>();
      for (const auto& s : j.at("events")) c.events.push_back(parse_event(s.get<std::string>()));
      out.push_back(std::move(c));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("chains line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("chains line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<EventChain> read_chains(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open chains file '" + path + "'");
  return read_chains(in);
}

}  // namespace graphplan
