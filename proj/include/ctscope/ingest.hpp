#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ctscope::ingest {

struct RawTweet {
  std::string id;
  std::int64_t timestamp_ms = 0;
  std::string user_id;
  // Absent when the record carries no user metadata.
  std::optional<std::int64_t> user_friends_count;
  std::optional<std::int64_t> user_followers_count;
  std::string full_text;
  std::int64_t quote_count = 0;
  std::int64_t reply_count = 0;
  std::int64_t retweet_count = 0;
  std::int64_t favorite_count = 0;
  std::optional<std::string> quoted_status_id;
  std::optional<std::string> quoted_status_user_id;
  std::optional<std::string> in_reply_to_status_id;
  std::optional<std::string> in_reply_to_user_id;
  bool is_retweet = false;

  /// Reference pairs with a status id but no user id are kept but yield no edge.
  bool quote_pair_valid() const { return quoted_status_id && quoted_status_user_id; }
  bool reply_pair_valid() const { return in_reply_to_status_id && in_reply_to_user_id; }
  bool malformed_quote_pair() const { return quoted_status_id.has_value() != quoted_status_user_id.has_value(); }
  bool malformed_reply_pair() const { return in_reply_to_status_id.has_value() != in_reply_to_user_id.has_value(); }

  bool operator==(const RawTweet&) const = default;
};

struct CleanTweet : RawTweet {
  std::string norm_text;
  std::vector<std::string> tokens;
};

struct LoadReport {
  std::size_t lines = 0;       // non-blank lines seen
  std::size_t loaded = 0;
  std::size_t malformed = 0;
  std::size_t duplicates = 0;
  std::size_t malformed_reference_pairs = 0;
  std::vector<std::size_t> malformed_lines;  // first 100, 1-based
};

struct LoadResult {
  std::vector<RawTweet> tweets;
  LoadReport report;
};

/// Parses one JSON record. Throws DataError describing the defect.
RawTweet parse_record(std::string_view line);

/// Line-delimited JSON records. Malformed lines are skipped and counted, or
/// abort with ParseError in strict mode. Duplicate ids keep the first record.
LoadResult load_tweets(std::istream& in, bool strict);
LoadResult load_tweets(const std::filesystem::path& path, bool strict);

/// Serializes a tweet back to the JSON record layout (flat field names).
std::string to_record(const RawTweet& t);

enum class MatchMode { kToken, kSubstring };

class KeywordList {
 public:
  explicit KeywordList(const std::vector<std::string>& keywords);
  static KeywordList load(const std::filesystem::path& path);
  const std::set<std::string>& keywords() const { return keywords_; }

 private:
  std::set<std::string> keywords_;
};

/// Keeps tweets whose full_text contains a keyword. Token mode matches whole
/// tokens (multi-token keywords match as contiguous token runs).
std::vector<RawTweet> filter_by_keywords(const std::vector<RawTweet>& tweets, const KeywordList& kw,
                                         MatchMode mode = MatchMode::kToken);
bool matches_keywords(const RawTweet& t, const KeywordList& kw, MatchMode mode);

std::string normalize_text(std::string_view text);

CleanTweet clean(const RawTweet& t);
std::vector<CleanTweet> clean_all(const std::vector<RawTweet>& tweets);

inline constexpr std::size_t kMinTemplateLength = 16;

class SpamTemplateList {
 public:
  SpamTemplateList() = default;
  /// Normalizes and lowercases each template; throws ConfigError when one is
  /// shorter than kMinTemplateLength afterwards.
  explicit SpamTemplateList(const std::vector<std::string>& templates);
  static SpamTemplateList load(const std::filesystem::path& path);
  const std::vector<std::string>& templates() const { return templates_; }

 private:
  std::vector<std::string> templates_;
};

struct SpamResult {
  std::vector<CleanTweet> kept;
  std::vector<CleanTweet> removed;
  // Indexed like templates(); a removed tweet counts toward its first matching template.
  std::vector<std::size_t> per_template;
};

SpamResult filter_spam(const std::vector<CleanTweet>& tweets, const SpamTemplateList& templates);

struct VolumeSeries {
  std::int64_t bin_width_ms = 0;
  std::vector<std::pair<std::int64_t, std::size_t>> bins;
  bool empty = false;
};

template <typename T>
concept Timestamped = requires(const T& t) { t.timestamp_ms; };

VolumeSeries volume_histogram(const std::vector<std::int64_t>& timestamps, std::int64_t bin_width_ms);

template <Timestamped T>
VolumeSeries volume_histogram(const std::vector<T>& tweets, std::int64_t bin_width_ms) {
  std::vector<std::int64_t> ts;
  ts.reserve(tweets.size());
  for (const auto& t : tweets) ts.push_back(t.timestamp_ms);
  return volume_histogram(ts, bin_width_ms);
}

std::string volume_csv(const VolumeSeries& series);

inline constexpr std::int64_t kTwelveHoursMs = 12LL * 3600 * 1000;

}  // namespace ctscope::ingest
