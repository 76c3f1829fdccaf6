#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctscope/polarity.hpp"
#include "ctscope/text.hpp"

namespace ctscope::topics {

using text::tokenize;

inline constexpr std::size_t kExcludeTop = 10;
inline constexpr std::string_view kTfIdfVariant = "tf=raw-count;idf=ln((1+N)/(1+df))+1;norm=l2";

struct TfIdfModel {
  std::vector<std::string> terms;  // column index -> term, lexicographic
  std::unordered_map<std::string, std::size_t> vocabulary;
  std::vector<double> idf;
  std::vector<std::size_t> df;
  std::size_t doc_count = 0;
  std::string variant{kTfIdfVariant};
  // Per document: (column, L2-normalized weight), sorted by column.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> docs;

  double weight(std::size_t doc, const std::string& term) const;
};

/// Throws DataError when every document is empty.
TfIdfModel fit_tfidf(const std::vector<std::vector<std::string>>& docs);

struct TermScore {
  std::string term;
  double score = 0.0;
  bool operator==(const TermScore&) const = default;
};

/// Sums each term's normalized weight over the subset; the top n with
/// positive score, descending, ties lexicographic. Throws on an empty subset.
std::vector<TermScore> top_terms(const TfIdfModel& model, std::span<const std::size_t> doc_ids, std::size_t n);

struct Scope {
  int cluster = -1;                 // -1: dataset level
  std::optional<Polarity> label;
  std::string str() const;
};

struct KeywordReport {
  Scope scope;
  std::vector<TermScore> ranked_terms;
  std::vector<std::string> excluded_terms;
  bool empty = false;  // no documents in scope
};

struct ClusterKeywords {
  KeywordReport overall;
  std::vector<KeywordReport> clusters;  // index = cluster id
};

/// Per-cluster top-n with the dataset-level top-10 removed. `assignments` is
/// per document; negative entries belong to no cluster.
ClusterKeywords cluster_keywords(const TfIdfModel& model, const std::vector<int>& assignments, std::size_t k,
                                 std::size_t n = 10);

struct SentimentKeywords {
  Polarity label;
  KeywordReport overall;                // dataset level for this label
  std::vector<KeywordReport> clusters;  // index = cluster id
};

/// Same exclusion rule applied within each sentiment label.
std::vector<SentimentKeywords> sentiment_keywords(const TfIdfModel& model, const std::vector<int>& assignments,
                                                  const std::vector<Polarity>& labels, std::size_t k,
                                                  std::size_t n = 10);

std::string reports_csv(const std::vector<KeywordReport>& reports);
std::string reports_json(const std::vector<KeywordReport>& reports);
std::vector<KeywordReport> reports_from_json(std::string_view json_text);
std::string vocabulary_tsv(const TfIdfModel& model);

}  // namespace ctscope::topics
