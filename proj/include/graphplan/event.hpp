#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphplan/error.hpp"
#include "graphplan/lexicon.hpp"
#include "graphplan/stemmer.hpp"
#include "graphplan/text.hpp"

namespace graphplan {

// A normalized verb phrase: [(not)]head[(modifier)].
struct Event {
  std::string head;
  std::optional<std::string> modifier;
  bool negated = false;

  std::string surface() const {
    std::string s;
    if (negated) s += "(not)";
    s += head;
    if (modifier) {
      s += '(';
      s += *modifier;
      s += ')';
    }
    return s;
  }

  friend bool operator==(const Event& a, const Event& b) { return a.surface() == b.surface(); }
  friend auto operator<=>(const Event& a, const Event& b) { return a.surface() <=> b.surface(); }
};

// Inverse of Event::surface(). Rejects anything that is not
// "[(not)]word[(word)]" with lowercase ASCII words, which also keeps the
// special prompt tokens out of event vocabularies.
inline Event parse_event(std::string_view s) {
  const std::string original(s);
  Event e;
  constexpr std::string_view kNot = "(not)";
  if (s.substr(0, kNot.size()) == kNot) {
    e.negated = true;
    s.remove_prefix(kNot.size());
  }
  const std::size_t open = s.find('(');
  if (open == std::string_view::npos) {
    e.head = std::string(s);
  } else {
    if (s.back() != ')') throw DataError("malformed event '" + original + "'");
    e.head = std::string(s.substr(0, open));
    e.modifier = std::string(s.substr(open + 1, s.size() - open - 2));
    if (!is_alpha_word(*e.modifier)) throw DataError("malformed event '" + original + "'");
  }
  if (!is_alpha_word(e.head)) throw DataError("malformed event '" + original + "'");
  return e;
}

// Maps a word to its event spelling: irregular inflections go to their base
// form, then the Porter stem is taken. With readable labels on, a stem that
// belongs to a known word is spelled as that word.
class WordNormalizer {
 public:
  explicit WordNormalizer(bool readable_labels = true) : readable_(readable_labels) {}

  // Returns "" when nothing alphabetic remains.
  std::string operator()(std::string_view raw) const {
    std::string w;
    for (char c : to_lower(raw)) {
      if (c >= 'a' && c <= 'z') w.push_back(c);
    }
    if (w.empty()) return w;
    const auto& irregular = lexicon::irregular_forms();
    if (auto it = irregular.find(w); it != irregular.end()) w = it->second;
    std::string stem = stem_token(w);
    if (readable_) {
      const auto& labels = lexicon::stem_labels();
      if (auto it = labels.find(stem); it != labels.end()) return it->second;
    }
    return stem;
  }

  bool readable_labels() const { return readable_; }

 private:
  bool readable_;
};

inline std::vector<std::string> surfaces(const std::vector<Event>& events) {
  std::vector<std::string> out;
  out.reserve(events.size());
  for (const Event& e : events) out.push_back(e.surface());
  return out;
}

}  // namespace graphplan
