#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace graphplan {

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool is_alpha_word(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

// Whitespace split. Frame offsets in the corpus format index into exactly
// this token sequence.
inline std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Lowercases a raw token and trims leading/trailing characters that are not
// letters or apostrophes. "Glasses." -> "glasses", "didn't" -> "didn't",
// "--" -> "".
inline std::string normalize_token(std::string_view raw) {
  std::string w = to_lower(raw);
  auto keep = [](char c) { return (c >= 'a' && c <= 'z') || c == '\''; };
  std::size_t b = 0;
  std::size_t e = w.size();
  while (b < e && !keep(w[b])) ++b;
  while (e > b && !keep(w[e - 1])) --e;
  w = w.substr(b, e - b);
  while (!w.empty() && w.front() == '\'') w.erase(w.begin());
  return w;
}

// One normalized word per whitespace token (possibly empty for punctuation).
inline std::vector<std::string> sentence_words(std::string_view sentence) {
  std::vector<std::string> words;
  for (const std::string& raw : split_whitespace(sentence)) words.push_back(normalize_token(raw));
  return words;
}

// Alphabetic lowercase words only, apostrophe pieces dropped. Used for
// titles and topic-model documents.
inline std::vector<std::string> content_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
    if (c >= 'a' && c <= 'z') {
      cur.push_back(c);
    } else if (c == '\'') {
      // "john's" -> "john"; skip the clitic.
      flush();
      while (i + 1 < text.size() && std::isalpha(static_cast<unsigned char>(text[i + 1]))) ++i;
    } else {
      flush();
    }
  }
  flush();
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// 64-bit FNV-1a, used for provenance hashes of input files.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace graphplan
