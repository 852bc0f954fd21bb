#pragma once

// Porter suffix-stripping stemmer, original 1980 rule set.

#include <array>
#include <string>
#include <string_view>

namespace graphplan {

namespace porter_detail {

inline bool is_vowel_letter(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// 'y' is a consonant at the start of a word or after a vowel.
inline bool is_consonant(std::string_view w, std::size_t i) {
  if (is_vowel_letter(w[i])) return false;
  if (w[i] == 'y') return i == 0 ? true : !is_consonant(w, i - 1);
  return true;
}

// m in [C](VC){m}[V]
inline int measure(std::string_view w) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool cons = is_consonant(w, i);
    if (cons && prev_vowel) ++m;
    prev_vowel = !cons;
  }
  return m;
}

inline bool contains_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

inline bool ends_double_consonant(std::string_view w) {
  const std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
inline bool ends_cvc(std::string_view w) {
  const std::size_t n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  return is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) &&
         last != 'w' && last != 'x' && last != 'y';
}

inline bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  int min_measure;  // rule applies when measure(stem) > min_measure
};

// The first rule whose suffix matches decides: if its condition fails the
// word is returned unchanged and later rules are not tried.
template <std::size_t N>
inline std::string apply_first(const std::string& w, const std::array<Rule, N>& rules) {
  for (const Rule& r : rules) {
    if (!ends_with(w, r.suffix)) continue;
    std::string stem = w.substr(0, w.size() - r.suffix.size());
    if (measure(stem) > r.min_measure) return stem + std::string(r.replacement);
    return w;
  }
  return w;
}

inline std::string step1a(const std::string& w) {
  if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
  if (ends_with(w, "ies")) return w.substr(0, w.size() - 2);
  if (ends_with(w, "ss")) return w;
  if (ends_with(w, "s")) return w.substr(0, w.size() - 1);
  return w;
}

inline std::string step1b(const std::string& w) {
  if (ends_with(w, "eed")) {
    std::string stem = w.substr(0, w.size() - 3);
    return measure(stem) > 0 ? stem + "ee" : w;
  }
  std::string stem;
  bool stripped = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix)) {
      std::string candidate = w.substr(0, w.size() - suffix.size());
      if (contains_vowel(candidate)) {
        stem = std::move(candidate);
        stripped = true;
        break;
      }
    }
  }
  if (!stripped) return w;

  if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz")) return stem + "e";
  if (ends_double_consonant(stem)) {
    const char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

inline std::string step1c(const std::string& w) {
  if (ends_with(w, "y")) {
    std::string stem = w.substr(0, w.size() - 1);
    if (contains_vowel(stem)) return stem + "i";
  }
  return w;
}

inline std::string step2(const std::string& w) {
  static constexpr std::array<Rule, 20> kRules{{
      {"ational", "ate", 0}, {"tional", "tion", 0}, {"enci", "ence", 0},
      {"anci", "ance", 0},   {"izer", "ize", 0},    {"abli", "able", 0},
      {"alli", "al", 0},     {"entli", "ent", 0},   {"eli", "e", 0},
      {"ousli", "ous", 0},   {"ization", "ize", 0}, {"ation", "ate", 0},
      {"ator", "ate", 0},    {"alism", "al", 0},    {"iveness", "ive", 0},
      {"fulness", "ful", 0}, {"ousness", "ous", 0}, {"aliti", "al", 0},
      {"iviti", "ive", 0},   {"biliti", "ble", 0},
  }};
  return apply_first(w, kRules);
}

inline std::string step3(const std::string& w) {
  static constexpr std::array<Rule, 7> kRules{{
      {"icate", "ic", 0},
      {"ative", "", 0},
      {"alize", "al", 0},
      {"iciti", "ic", 0},
      {"ical", "ic", 0},
      {"ful", "", 0},
      {"ness", "", 0},
  }};
  return apply_first(w, kRules);
}

inline std::string step4(const std::string& w) {
  static constexpr std::array<std::string_view, 19> kSuffixes{
      "al",  "ance", "ence", "er", "ic",  "able", "ible", "ant", "ement", "ment",
      "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
  for (std::string_view suffix : kSuffixes) {
    if (!ends_with(w, suffix)) continue;
    std::string stem = w.substr(0, w.size() - suffix.size());
    bool ok = measure(stem) > 1;
    if (suffix == "ion") ok = ok && !stem.empty() && (stem.back() == 's' || stem.back() == 't');
    return ok ? stem : w;
  }
  return w;
}

inline std::string step5a(const std::string& w) {
  if (ends_with(w, "e")) {
    std::string stem = w.substr(0, w.size() - 1);
    const int m = measure(stem);
    if (m > 1) return stem;
    if (m == 1 && !ends_cvc(stem)) return stem;
  }
  return w;
}

inline std::string step5b(const std::string& w) {
  if (ends_with(w, "ll") && measure(std::string_view(w).substr(0, w.size() - 1)) > 1) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

}  // namespace porter_detail

// Returns the Porter stem of a lowercase alphabetic token. Anything that is
// not purely [a-z] comes back unchanged.
inline std::string stem_token(std::string_view token) {
  if (token.empty()) return std::string(token);
  for (char c : token) {
    if (c < 'a' || c > 'z') return std::string(token);
  }
  namespace p = porter_detail;
  std::string w(token);
  w = p::step1a(w);
  w = p::step1b(w);
  w = p::step1c(w);
  w = p::step2(w);
  w = p::step3(w);
  w = p::step4(w);
  w = p::step5a(w);
  w = p::step5b(w);
  return w;
}

}  // namespace graphplan
