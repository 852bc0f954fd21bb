#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphplan/error.hpp"
#include "graphplan/planner.hpp"

namespace graphplan {

struct NgramCounts {
  std::size_t unique = 0;
  std::size_t total = 0;
};

inline NgramCounts count_ngrams(const std::vector<std::vector<std::string>>& sequences, int n) {
  if (n != 1 && n != 2) throw UsageError("dist_n: n must be 1 or 2");
  std::set<std::vector<std::string>> seen;
  NgramCounts c;
  for (const auto& seq : sequences) {
    if (seq.size() < static_cast<std::size_t>(n)) continue;
    for (std::size_t i = 0; i + n <= seq.size(); ++i) {
      seen.emplace(seq.begin() + static_cast<std::ptrdiff_t>(i), seq.begin() + static_cast<std::ptrdiff_t>(i + n));
      ++c.total;
    }
  }
  c.unique = seen.size();
  return c;
}

// Distinct n-grams over all n-gram tokens, pooled across sequences.
inline double dist_n(const std::vector<std::vector<std::string>>& sequences, int n) {
  const NgramCounts c = count_ngrams(sequences, n);
  if (c.total == 0) throw DataError("dist-" + std::to_string(n) + ": undefined metric (no n-grams)");
  return static_cast<double>(c.unique) / static_cast<double>(c.total);
}

// Mean of per-sequence Dist-n over sequences that have at least one n-gram.
inline double dist_n_per_sequence(const std::vector<std::vector<std::string>>& sequences, int n) {
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto& seq : sequences) {
    if (seq.size() < static_cast<std::size_t>(n)) continue;
    sum += dist_n({seq}, n);
    ++used;
  }
  if (used == 0) throw DataError("dist-" + std::to_string(n) + ": undefined metric (no n-grams)");
  return sum / static_cast<double>(used);
}

struct DiversityReport {
  double dist1 = 0.0;
  double dist2 = 0.0;
  std::size_t n_sequences = 0;
  std::size_t n_unigrams = 0;
  std::size_t n_bigrams = 0;
};

inline DiversityReport diversity_report(const std::vector<Plan>& plans, bool per_sequence = false) {
  if (plans.empty()) throw DataError("diversity_report: no plans");
  std::vector<std::vector<std::string>> seqs;
  seqs.reserve(plans.size());
  for (const Plan& p : plans) seqs.push_back(p.events);
  DiversityReport r;
  r.n_sequences = seqs.size();
  r.n_unigrams = count_ngrams(seqs, 1).total;
  r.n_bigrams = count_ngrams(seqs, 2).total;
  r.dist1 = per_sequence ? dist_n_per_sequence(seqs, 1) : dist_n(seqs, 1);
  r.dist2 = per_sequence ? dist_n_per_sequence(seqs, 2) : dist_n(seqs, 2);
  return r;
}

inline nlohmann::json report_to_json(const DiversityReport& r) {
  return nlohmann::json{{"dist1", r.dist1},
                        {"dist2", r.dist2},
                        {"n_sequences", r.n_sequences},
                        {"n_unigrams", r.n_unigrams},
                        {"n_bigrams", r.n_bigrams}};
}

}  // namespace graphplan
