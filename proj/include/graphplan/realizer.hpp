#pragma once

// Template realization of plans and prompt export.
//
// Template file:
//   {"default_subject": "Sam",
//    "subjects": ["tom", "anna"],                 (optional)
//    "templates": {"buy": ["{subj} bought {obj}."], "(not)take": [...]}}
// Keys are full event surfaces or bare head verbs. Every template holds
// exactly one {subj} slot and at most one {obj} slot.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphplan/error.hpp"
#include "graphplan/event.hpp"
#include "graphplan/planner.hpp"
#include "graphplan/random.hpp"
#include "graphplan/text.hpp"

namespace graphplan {

inline constexpr std::string_view kTitleSeparator = "<EOT>";
inline constexpr std::string_view kEventSeparator = "<SEP>";
inline constexpr std::string_view kEndOfInput = "<|endofinput|>";
inline constexpr std::string_view kMaskToken = "[MASK]";

namespace realizer_detail {

inline std::size_t count_occurrences(std::string_view s, std::string_view what) {
  std::size_t n = 0;
  for (std::size_t pos = s.find(what); pos != std::string_view::npos; pos = s.find(what, pos + what.size())) ++n;
  return n;
}

inline std::string replace_all(std::string s, std::string_view what, std::string_view with) {
  for (std::size_t pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + with.size())) {
    s.replace(pos, what.size(), with);
  }
  return s;
}

inline std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace realizer_detail

class TemplateSet {
 public:
  TemplateSet() = default;
  explicit TemplateSet(std::string default_subject) : default_subject_(std::move(default_subject)) {}

  void add(const std::string& key, const std::string& tmpl) {
    using realizer_detail::count_occurrences;
    if (count_occurrences(tmpl, "{subj}") != 1) {
      throw DataError("template for '" + key + "' must contain exactly one {subj} slot");
    }
    if (count_occurrences(tmpl, "{obj}") > 1) throw DataError("template for '" + key + "' has more than one {obj}");
    templates_[key].push_back(tmpl);
  }

  void add_subject(const std::string& s) { subjects_.push_back(to_lower(s)); }

  const std::string& default_subject() const { return default_subject_; }
  const std::vector<std::string>& subjects() const { return subjects_; }

  // Full surface, then head verb; nullptr when neither has a template.
  const std::string* lookup(const Event& e) const {
    if (auto it = templates_.find(e.surface()); it != templates_.end() && !it->second.empty()) {
      return &it->second.front();
    }
    if (auto it = templates_.find(e.head); it != templates_.end() && !it->second.empty()) {
      return &it->second.front();
    }
    return nullptr;
  }

 private:
  std::string default_subject_ = "Sam";
  std::vector<std::string> subjects_;
  std::map<std::string, std::vector<std::string>> templates_;
};

inline TemplateSet templates_from_json(const nlohmann::json& j) {
  try {
    TemplateSet t(j.value("default_subject", std::string("Sam")));
    if (j.contains("subjects")) {
      for (const auto& s : j["subjects"]) t.add_subject(s.get<std::string>());
    }
    if (j.contains("templates")) {
      for (const auto& [key, list] : j["templates"].items()) {
        if (list.is_string()) {
          t.add(key, list.get<std::string>());
        } else {
          for (const auto& s : list) t.add(key, s.get<std::string>());
        }
      }
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("template file: ") + e.what());
  }
}

inline TemplateSet load_templates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open template file '" + path + "'");
  try {
    return templates_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("template file '" + path + "': " + e.what());
  }
}

// One sentence per event. The subject is the first title word that names a
// known subject, else the default subject; {obj} is the last title word.
inline std::vector<std::string> realize(const std::vector<std::string>& title, const std::vector<std::string>& events,
                                        const TemplateSet& templates) {
  using namespace realizer_detail;
  std::string subject = templates.default_subject();
  for (const std::string& w : title) {
    const auto& known = templates.subjects();
    if (std::find(known.begin(), known.end(), w) != known.end()) {
      subject = capitalize(w);
      break;
    }
  }
  const std::string object = title.empty() ? std::string("it") : "the " + title.back();

  std::vector<std::string> out;
  out.reserve(events.size());
  for (const std::string& surface : events) {
    const Event e = parse_event(surface);
    std::string sentence;
    if (const std::string* tmpl = templates.lookup(e)) {
      sentence = replace_all(replace_all(*tmpl, "{subj}", subject), "{obj}", object);
    } else {
      sentence = subject + " did: " + surface + ".";
    }
    out.push_back(capitalize(std::move(sentence)));
  }
  return out;
}

inline std::vector<std::string> realize(const Plan& plan, const TemplateSet& templates) {
  if (plan.events.empty()) throw DataError("realize: empty plan");
  return realize(plan.input, plan.events, templates);
}

// With a mask rate in (0, 1) each event is independently replaced by [MASK]
// using draws from `mask_rng`; a rate of 1 masks every event.
// "title words <EOT> e1 <SEP> e2 ... <|endofinput|>"
inline std::string export_prompt(const std::vector<std::string>& title, const std::vector<std::string>& events,
                                 Rng* mask_rng = nullptr, double mask_rate = 0.0) {
  if (events.empty()) throw DataError("export_prompt: no events");
  if (mask_rate < 0.0 || mask_rate > 1.0) throw UsageError("mask rate must be in [0, 1]");
  std::string out;
  for (const std::string& w : title) {
    out += w;
    out += ' ';
  }
  out += kTitleSeparator;
  for (std::size_t i = 0; i < events.size(); ++i) {
    out += ' ';
    if (i > 0) {
      out += kEventSeparator;
      out += ' ';
    }
    bool masked = false;
    if (mask_rate >= 1.0) {
      masked = true;
    } else if (mask_rate > 0.0 && mask_rng != nullptr) {
      masked = mask_rng->uniform() < mask_rate;
    }
    out += masked ? std::string(kMaskToken) : events[i];
  }
  out += ' ';
  out += kEndOfInput;
  return out;
}

}  // namespace graphplan
