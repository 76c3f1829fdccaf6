#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctscope/ingest.hpp"
#include "ctscope/polarity.hpp"

namespace ctscope::sentiment {

struct SentimentLabel {
  Polarity label = Polarity::kNeutral;
  double confidence = 0.0;
  std::optional<std::array<double, 3>> distribution;  // (p_pos, p_neu, p_neg)

  /// +p_pos - p_neg when a distribution exists, otherwise +1 / 0 / -1.
  double signed_score() const;
  /// Throws DataError unless confidence is in [0,1] and any distribution is on
  /// the simplex (1e-6) with label == argmax (ties -> neutral).
  void validate() const;
  bool operator==(const SentimentLabel&) const = default;
};

/// argmax of (p_pos, p_neu, p_neg); any tie involving the maximum resolves to neutral.
Polarity argmax_label(const std::array<double, 3>& dist);

class SentimentProvider {
 public:
  virtual ~SentimentProvider() = default;
  virtual std::string name() const = 0;
  virtual SentimentLabel score(const ingest::CleanTweet& tweet) const = 0;
  /// Throws CoverageError listing ids the provider cannot score.
  virtual void check_coverage(const std::vector<ingest::CleanTweet>&) const {}
};

/// CSV: tweet_id,label,confidence[,p_pos,p_neu,p_neg]; an optional header row.
class PrecomputedSentiment final : public SentimentProvider {
 public:
  explicit PrecomputedSentiment(std::unordered_map<std::string, SentimentLabel> labels);
  static PrecomputedSentiment parse(std::string_view csv);
  static PrecomputedSentiment load(const std::filesystem::path& path);
  std::string name() const override { return "precomputed"; }
  SentimentLabel score(const ingest::CleanTweet& tweet) const override;
  void check_coverage(const std::vector<ingest::CleanTweet>& tweets) const override;

 private:
  std::unordered_map<std::string, SentimentLabel> labels_;
};

using Lexicon = std::unordered_map<std::string, double>;

/// Small built-in valence lexicon for crypto discourse.
const Lexicon& default_lexicon();
/// TSV: term<TAB>valence in [-1,1]; '#' comments allowed.
Lexicon load_lexicon(const std::filesystem::path& path);

struct LexiconOptions {
  double pos_threshold = 0.15;
  double neg_threshold = -0.15;
  bool raw_text = false;  // score full_text instead of norm_text
};

/// s = sum of matched valences / max(1, matches). Positive above
/// pos_threshold, negative below neg_threshold. With m = min(1, |s|):
/// polar labels get confidence m and distribution p_label = (1+m)/2,
/// p_neu = (1-m)/3, p_opposite = (1-m)/6; neutral gets confidence 1-m and
/// p_neu = 1-m/2 with the remaining m/2 on the side of sign(s).
SentimentLabel lexicon_score(std::string_view text, const Lexicon& lexicon, const LexiconOptions& opts = {});
double lexicon_raw_score(std::string_view text, const Lexicon& lexicon);

class LexiconSentiment final : public SentimentProvider {
 public:
  explicit LexiconSentiment(Lexicon lexicon = default_lexicon(), LexiconOptions opts = {});
  std::string name() const override { return "lexicon"; }
  SentimentLabel score(const ingest::CleanTweet& tweet) const override;

 private:
  Lexicon lexicon_;
  LexiconOptions opts_;
};

/// Scores every tweet (per-tweet parallel) after a coverage check.
std::vector<SentimentLabel> score_all(const SentimentProvider& provider, const std::vector<ingest::CleanTweet>& tweets);

std::string labels_csv(const std::vector<std::string>& ids, const std::vector<SentimentLabel>& labels);

struct TimelineBin {
  std::int64_t bin_start_ms = 0;
  std::size_t n = 0;
  // All empty when n == 0.
  std::optional<double> ratio_pos, ratio_neu, ratio_neg, avg_sentiment;
};

struct SentimentTimeline {
  int scope = -1;  // -1: overall
  std::int64_t bin_width_ms = 0;
  std::vector<TimelineBin> bins;
};

/// One timeline for the whole input (scope -1) followed by one per
/// non-negative scope id, ascending. All timelines share the same bin grid.
std::vector<SentimentTimeline> timeline(std::span<const std::int64_t> timestamps,
                                        std::span<const SentimentLabel> labels, std::span<const int> scopes,
                                        std::int64_t bin_width_ms);

std::string timeline_csv(const SentimentTimeline& t);

}  // namespace ctscope::sentiment
