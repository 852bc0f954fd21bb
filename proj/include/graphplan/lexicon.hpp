#pragma once

// Closed word lists used by event normalization, the fallback extractor and
// topic-model preprocessing.

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graphplan/stemmer.hpp"

namespace graphplan::lexicon {

// Particles appended to a verb when they directly follow it.
inline constexpr std::array<std::string_view, 11> kPrepositions{
    "up", "over", "out", "off", "on", "in", "down", "away", "back", "around", "through"};

inline bool is_preposition(std::string_view w) {
  return std::find(kPrepositions.begin(), kPrepositions.end(), w) != kPrepositions.end();
}

inline constexpr std::string_view kVerbLemmas[] = {
    "accept",   "add",      "admire",   "admit",    "adopt",    "agree",    "allow",
    "announce", "answer",   "apologize", "appear",  "apply",    "argue",    "arrive",
    "ask",      "attack",   "attend",   "avoid",    "bake",     "bark",     "be",
    "beat",     "become",   "begin",    "believe",  "bite",     "bleed",    "blow",
    "boil",     "borrow",   "break",    "bring",    "build",    "burn",     "buy",
    "call",     "calm",     "camp",     "care",     "carry",    "catch",    "celebrate",
    "change",   "chase",    "cheer",    "choose",   "clean",    "climb",    "close",
    "collect",  "come",     "compete",  "complain", "complete", "continue", "cook",
    "cough",    "count",    "crash",    "cry",      "cut",      "dance",    "decide",
    "deliver",  "destroy",  "die",      "dig",      "discover", "do",       "drag",
    "draw",     "dream",    "dress",    "drink",    "drive",    "drop",     "eat",
    "enjoy",    "enter",    "escape",   "excite",   "explain",  "explore",  "fail",
    "fall",     "feed",     "feel",     "fight",    "fill",     "find",     "finish",
    "fish",     "fix",      "fly",      "follow",   "forget",   "forgive",  "freeze",
    "get",      "give",     "go",       "grab",     "graduate", "greet",    "grow",
    "guess",    "hate",     "have",     "hear",     "help",     "hide",     "hike",
    "hire",     "hit",      "hold",     "hope",     "hug",      "hunt",     "hurry",
    "hurt",     "ignore",   "invite",   "join",     "jump",     "keep",     "kick",
    "kill",     "kiss",     "knit",     "knock",    "know",     "land",     "laugh",
    "learn",    "leave",    "lend",     "let",      "lie",      "lift",     "like",
    "listen",   "live",     "lock",     "look",     "lose",     "love",     "make",
    "marry",    "meet",     "melt",     "miss",     "move",     "need",     "notice",
    "offer",    "open",     "order",    "organize", "paint",    "pass",     "pay",
    "pick",     "plan",     "plant",    "play",     "pour",     "practice", "pray",
    "prepare",  "promise",  "pull",     "punish",   "push",     "put",      "quit",
    "rain",     "reach",    "read",     "realize",  "receive",  "recover",  "refuse",
    "relax",    "remember", "rent",     "repair",   "replace",  "rescue",   "rest",
    "return",   "ride",     "ring",     "rob",      "run",      "rush",     "save",
    "say",      "scare",    "scream",   "search",   "see",      "sell",     "send",
    "serve",    "shatter",  "shop",     "shout",    "show",     "sign",     "sing",
    "sit",      "skate",    "ski",      "sleep",    "slip",     "smell",    "smile",
    "snap",     "sneeze",   "solve",    "speak",    "spend",    "spill",    "stand",
    "start",    "stay",     "steal",    "stop",     "study",    "succeed",  "surprise",
    "swim",     "take",     "talk",     "taste",    "teach",    "tell",     "thank",
    "think",    "throw",    "tie",      "train",    "travel",   "try",      "turn",
    "understand", "upset",  "use",      "visit",    "wait",     "wake",     "walk",
    "want",     "wash",     "watch",    "wear",     "win",      "wish",     "work",
    "worry",    "write",    "yell",
};

// Words that commonly appear as secondary predicates (be(...)).
inline constexpr std::string_view kPredicateWords[] = {
    "afraid", "angry",  "anxious", "ashamed", "bored", "busy",  "calm",   "cold",
    "excited", "full",  "glad",    "happy",   "hungry", "late", "lonely", "lucky",
    "mad",    "nervous", "proud",  "ready",   "sad",   "scared", "sick",  "sore",
    "sorry",  "thirsty", "tired",  "upset",   "worried",
};

// Irregular inflections mapped to their base form before stemming.
inline const std::unordered_map<std::string, std::string>& irregular_forms() {
  static const std::unordered_map<std::string, std::string> kForms{
      {"am", "be"},        {"is", "be"},         {"are", "be"},       {"was", "be"},
      {"were", "be"},      {"been", "be"},       {"being", "be"},     {"ate", "eat"},
      {"eaten", "eat"},    {"beat", "beat"},     {"became", "become"}, {"began", "begin"},
      {"begun", "begin"},  {"bit", "bite"},      {"bitten", "bite"},  {"bled", "bleed"},
      {"blew", "blow"},    {"blown", "blow"},    {"broke", "break"},  {"broken", "break"},
      {"brought", "bring"}, {"built", "build"},  {"burnt", "burn"},   {"bought", "buy"},
      {"caught", "catch"}, {"chose", "choose"},  {"chosen", "choose"}, {"came", "come"},
      {"dug", "dig"},      {"did", "do"},        {"done", "do"},      {"does", "do"},
      {"drew", "draw"},    {"drawn", "draw"},    {"drank", "drink"},  {"drunk", "drink"},
      {"drove", "drive"},  {"driven", "drive"},  {"fell", "fall"},    {"fallen", "fall"},
      {"fed", "feed"},     {"felt", "feel"},     {"fought", "fight"}, {"found", "find"},
      {"flew", "fly"},     {"flown", "fly"},     {"forgot", "forget"}, {"forgotten", "forget"},
      {"forgave", "forgive"}, {"froze", "freeze"}, {"frozen", "freeze"}, {"got", "get"},
      {"gotten", "get"},   {"gave", "give"},     {"given", "give"},   {"went", "go"},
      {"gone", "go"},      {"goes", "go"},       {"grew", "grow"},    {"grown", "grow"},
      {"had", "have"},     {"has", "have"},      {"heard", "hear"},   {"hid", "hide"},
      {"hidden", "hide"},  {"held", "hold"},     {"hurt", "hurt"},    {"kept", "keep"},
      {"knew", "know"},    {"known", "know"},    {"left", "leave"},   {"lent", "lend"},
      {"lay", "lie"},      {"lost", "lose"},     {"made", "make"},    {"met", "meet"},
      {"paid", "pay"},     {"ran", "run"},       {"rang", "ring"},    {"rung", "ring"},
      {"rode", "ride"},    {"ridden", "ride"},   {"said", "say"},     {"saw", "see"},
      {"seen", "see"},     {"sold", "sell"},     {"sent", "send"},    {"sang", "sing"},
      {"sung", "sing"},    {"sat", "sit"},       {"slept", "sleep"},  {"spoke", "speak"},
      {"spoken", "speak"}, {"spent", "spend"},   {"spilt", "spill"},  {"stood", "stand"},
      {"stole", "steal"},  {"stolen", "steal"},  {"swam", "swim"},    {"swum", "swim"},
      {"took", "take"},    {"taken", "take"},    {"taught", "teach"}, {"told", "tell"},
      {"thought", "think"}, {"threw", "throw"},  {"thrown", "throw"}, {"understood", "understand"},
      {"woke", "wake"},    {"woken", "wake"},    {"wore", "wear"},    {"worn", "wear"},
      {"won", "win"},      {"wrote", "write"},   {"written", "write"},
  };
  return kForms;
}

inline bool is_verb_lemma(std::string_view w) {
  return std::find(std::begin(kVerbLemmas), std::end(kVerbLemmas), w) != std::end(kVerbLemmas);
}

inline bool is_predicate_word(std::string_view w) {
  return std::find(std::begin(kPredicateWords), std::end(kPredicateWords), w) !=
         std::end(kPredicateWords);
}

// -s, -ed and -ing forms built by the regular spelling rules.
inline std::vector<std::string> regular_inflections(std::string_view lemma) {
  const std::string w(lemma);
  if (w.size() < 2) return {};
  const char last = w.back();
  const bool consonant_y = last == 'y' && std::string_view("aeiou").find(w[w.size() - 2]) == std::string_view::npos;
  std::vector<std::string> out;
  if (consonant_y) {
    const std::string base = w.substr(0, w.size() - 1);
    out = {base + "ies", base + "ied", w + "ing"};
  } else if (last == 'e') {
    out = {w + "s", w + "d", w.substr(0, w.size() - 1) + "ing"};
  } else {
    const bool sibilant = last == 's' || last == 'x' || last == 'z' || w.ends_with("ch") || w.ends_with("sh");
    out = {w + (sibilant ? "es" : "s"), w + "ed", w + "ing"};
  }
  return out;
}

// Porter stem -> readable representative word. Events are keyed by stem
// class; the representative only changes how the class is spelled
// ("decid" is printed as "decide"). Verbs win over predicate words when both
// share a stem.
inline const std::unordered_map<std::string, std::string>& stem_labels() {
  static const std::unordered_map<std::string, std::string> kLabels = [] {
    std::unordered_map<std::string, std::string> m;
    for (std::string_view w : kVerbLemmas) m.emplace(stem_token(w), std::string(w));
    // Porter can split one verb across classes (try -> try, tried -> tri).
    for (std::string_view w : kVerbLemmas) {
      for (const std::string& form : regular_inflections(w)) m.emplace(stem_token(form), std::string(w));
    }
    for (std::string_view w : kPredicateWords) m.emplace(stem_token(w), std::string(w));
    return m;
  }();
  return kLabels;
}

inline const std::unordered_set<std::string>& auxiliaries() {
  static const std::unordered_set<std::string> kAux{
      "am",   "is",    "are",  "was",   "were",  "be",   "been",   "being", "do",
      "does", "did",   "have", "has",   "had",   "will", "would",  "can",   "could",
      "shall", "should", "may", "might", "must",  "ca",   "wo",
  };
  return kAux;
}

// Verbs that take a secondary predicate in the fallback extractor.
inline const std::unordered_set<std::string>& copulas() {
  static const std::unordered_set<std::string> kCopulas{
      "am",   "is",   "are",   "was",   "were",  "be",      "been",   "being",
      "get",  "gets", "got",   "getting", "feel", "feels",  "felt",   "feeling",
      "become", "becomes", "became", "seem", "seems", "seemed", "grew",
  };
  return kCopulas;
}

inline const std::unordered_set<std::string>& intensifiers() {
  static const std::unordered_set<std::string> kWords{
      "very", "so", "really", "too", "extremely", "quite", "pretty", "more", "even", "very"};
  return kWords;
}

inline bool is_negation(std::string_view w) {
  if (w == "not" || w == "never" || w == "no" || w == "n't") return true;
  return w.size() > 3 && w.substr(w.size() - 3) == "n't";
}

inline const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> kStop{
      "a",     "about", "after", "again", "all",   "also",  "an",    "and",   "any",
      "are",   "as",    "at",    "be",    "been",  "before", "being", "but",  "by",
      "can",   "could", "did",   "do",    "does",  "for",   "from",  "had",   "has",
      "have",  "he",    "her",   "hers",  "him",   "his",   "how",   "i",     "if",
      "in",    "into",  "is",    "it",    "its",   "just",  "me",    "my",    "no",
      "not",   "of",    "on",    "one",   "or",    "our",   "out",   "she",   "so",
      "some",  "that",  "the",   "their", "them",  "then",  "there", "they",  "this",
      "to",    "too",   "up",    "very",  "was",   "we",    "were",  "what",  "when",
      "which", "while", "who",   "will",  "with",  "would", "you",   "your",
  };
  return kStop;
}

}  // namespace graphplan::lexicon
