#include "ctscope/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unordered_set>

#include "ctscope/error.hpp"
#include "ctscope/text.hpp"
#include "ctscope/util.hpp"

namespace ctscope::ingest {

using nlohmann::json;

namespace {

// Looks up a field given alternative spellings; each spelling is either a flat
// key ("user_id"), a dotted key stored flat ("user.id"), or a nested path.
const json* find_field(const json& rec, std::initializer_list<std::string_view> names) {
  for (auto name : names) {
    auto it = rec.find(std::string(name));
    if (it != rec.end() && !it->is_null()) return &*it;
    if (name.find('.') == std::string_view::npos) continue;
    const json* cur = &rec;
    bool ok = true;
    for (const auto& part : util::split(name, '.')) {
      if (!cur->is_object()) {
        ok = false;
        break;
      }
      auto jt = cur->find(part);
      if (jt == cur->end() || jt->is_null()) {
        ok = false;
        break;
      }
      cur = &*jt;
    }
    if (ok) return cur;
  }
  return nullptr;
}

std::optional<std::string> id_field(const json& rec, std::initializer_list<std::string_view> names,
                                    std::string_view what) {
  const json* f = find_field(rec, names);
  if (!f) return std::nullopt;
  if (f->is_string()) {
    auto s = f->get<std::string>();
    if (s.empty()) throw DataError(std::string(what) + " is empty");
    return s;
  }
  if (f->is_number_unsigned()) return std::to_string(f->get<std::uint64_t>());
  if (f->is_number_integer()) {
    auto v = f->get<std::int64_t>();
    if (v < 0) throw DataError(std::string(what) + " is negative");
    return std::to_string(v);
  }
  throw DataError(std::string(what) + " must be a string or integer");
}

std::optional<std::int64_t> int_field(const json& rec, std::initializer_list<std::string_view> names,
                                      std::string_view what) {
  const json* f = find_field(rec, names);
  if (!f) return std::nullopt;
  std::optional<std::int64_t> v;
  if (f->is_number_integer()) {
    v = f->get<std::int64_t>();
  } else if (f->is_string()) {
    v = util::parse_int(f->get<std::string>());
  }
  if (!v) throw DataError(std::string(what) + " is not an integer");
  if (*v < 0) throw DataError(std::string(what) + " is negative");
  return v;
}

std::int64_t count_field(const json& rec, std::initializer_list<std::string_view> names, std::string_view what) {
  return int_field(rec, names, what).value_or(0);
}

}  // namespace

RawTweet parse_record(std::string_view line) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  if (!rec.is_object()) throw DataError("record is not a JSON object");

  RawTweet t;
  auto id = id_field(rec, {"id_str", "id"}, "id");
  if (!id) throw DataError("missing id");
  t.id = *id;

  auto ts = int_field(rec, {"timestamp_ms"}, "timestamp_ms");
  if (!ts) throw DataError("missing timestamp_ms");
  if (*ts <= 0) throw DataError("timestamp_ms must be positive");
  t.timestamp_ms = *ts;

  auto uid = id_field(rec, {"user_id", "user.id_str", "user.id"}, "user id");
  if (!uid) throw DataError("missing user id");
  t.user_id = *uid;
  t.user_friends_count = int_field(rec, {"user_friends_count", "user.friends_count"}, "friends_count");
  t.user_followers_count = int_field(rec, {"user_followers_count", "user.followers_count"}, "followers_count");

  const json* text = find_field(rec, {"full_text", "text"});
  if (!text || !text->is_string()) throw DataError("missing full_text");
  t.full_text = text->get<std::string>();

  t.quote_count = count_field(rec, {"quote_count"}, "quote_count");
  t.reply_count = count_field(rec, {"reply_count"}, "reply_count");
  t.retweet_count = count_field(rec, {"retweet_count"}, "retweet_count");
  t.favorite_count = count_field(rec, {"favorite_count"}, "favorite_count");

  t.quoted_status_id = id_field(rec, {"quoted_status_id_str", "quoted_status_id", "quoted_status.id_str", "quoted_status.id"},
                                "quoted_status_id");
  t.quoted_status_user_id = id_field(
      rec, {"quoted_status_user_id", "quoted_status.user.id_str", "quoted_status.user.id"}, "quoted_status_user_id");
  t.in_reply_to_status_id =
      id_field(rec, {"in_reply_to_status_id_str", "in_reply_to_status_id"}, "in_reply_to_status_id");
  t.in_reply_to_user_id = id_field(rec, {"in_reply_to_user_id_str", "in_reply_to_user_id"}, "in_reply_to_user_id");

  if (const json* rt = find_field(rec, {"is_retweet"})) {
    if (!rt->is_boolean()) throw DataError("is_retweet must be boolean");
    t.is_retweet = rt->get<bool>();
  } else {
    t.is_retweet = rec.contains("retweeted_status") && !rec["retweeted_status"].is_null();
  }
  return t;
}

std::string to_record(const RawTweet& t) {
  json rec = json::object();
  rec["id"] = t.id;
  rec["timestamp_ms"] = t.timestamp_ms;
  rec["user_id"] = t.user_id;
  if (t.user_friends_count) rec["user_friends_count"] = *t.user_friends_count;
  if (t.user_followers_count) rec["user_followers_count"] = *t.user_followers_count;
  rec["full_text"] = t.full_text;
  rec["quote_count"] = t.quote_count;
  rec["reply_count"] = t.reply_count;
  rec["retweet_count"] = t.retweet_count;
  rec["favorite_count"] = t.favorite_count;
  if (t.quoted_status_id) rec["quoted_status_id"] = *t.quoted_status_id;
  if (t.quoted_status_user_id) rec["quoted_status_user_id"] = *t.quoted_status_user_id;
  if (t.in_reply_to_status_id) rec["in_reply_to_status_id"] = *t.in_reply_to_status_id;
  if (t.in_reply_to_user_id) rec["in_reply_to_user_id"] = *t.in_reply_to_user_id;
  rec["is_retweet"] = t.is_retweet;
  return rec.dump(-1, ' ', false, json::error_handler_t::replace);
}

LoadResult load_tweets(std::istream& in, bool strict) {
  std::vector<std::string> lines;
  std::vector<std::size_t> line_no;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (util::trim(line).empty()) continue;
    lines.push_back(std::move(line));
    line_no.push_back(n);
  }
  if (in.bad()) throw IoError("error reading tweet stream");

  struct Parsed {
    std::optional<RawTweet> tweet;
    std::string error;
  };
  std::vector<Parsed> parsed(lines.size());
  // Shards are independent; the dedup merge below is the single owner.
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(lines.size()); ++i) {
    try {
      parsed[i].tweet = parse_record(lines[i]);
    } catch (const DataError& e) {
      parsed[i].error = e.what();
    }
  }

  LoadResult result;
  result.report.lines = lines.size();
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    auto& p = parsed[i];
    if (!p.tweet) {
      if (strict) throw ParseError(p.error, line_no[i]);
      ++result.report.malformed;
      if (result.report.malformed_lines.size() < 100) result.report.malformed_lines.push_back(line_no[i]);
      continue;
    }
    if (!seen.insert(p.tweet->id).second) {
      ++result.report.duplicates;
      continue;
    }
    if (p.tweet->malformed_quote_pair() || p.tweet->malformed_reply_pair()) {
      ++result.report.malformed_reference_pairs;
    }
    result.tweets.push_back(std::move(*p.tweet));
  }
  result.report.loaded = result.tweets.size();
  return result;
}

LoadResult load_tweets(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read tweets from " + path.string());
  return load_tweets(in, strict);
}

KeywordList::KeywordList(const std::vector<std::string>& keywords) {
  for (const auto& k : keywords) {
    auto t = util::to_lower(util::trim(k));
    if (!t.empty()) keywords_.insert(std::move(t));
  }
  if (keywords_.empty()) throw ConfigError("keyword list is empty");
}

KeywordList KeywordList::load(const std::filesystem::path& path) { return KeywordList(util::read_list_file(path)); }

bool matches_keywords(const RawTweet& t, const KeywordList& kw, MatchMode mode) {
  if (mode == MatchMode::kSubstring) {
    auto lower = util::to_lower(t.full_text);
    return std::any_of(kw.keywords().begin(), kw.keywords().end(),
                       [&](const std::string& k) { return lower.find(k) != std::string::npos; });
  }
  auto tokens = text::tokenize(t.full_text);
  std::unordered_set<std::string_view> token_set(tokens.begin(), tokens.end());
  for (const auto& k : kw.keywords()) {
    auto ktoks = text::tokenize(k);
    if (ktoks.empty()) continue;
    if (ktoks.size() == 1) {
      if (token_set.count(ktoks[0])) return true;
      continue;
    }
    auto it = std::search(tokens.begin(), tokens.end(), ktoks.begin(), ktoks.end());
    if (it != tokens.end()) return true;
  }
  return false;
}

std::vector<RawTweet> filter_by_keywords(const std::vector<RawTweet>& tweets, const KeywordList& kw, MatchMode mode) {
  std::vector<char> keep(tweets.size(), 0);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tweets.size()); ++i) {
    keep[i] = matches_keywords(tweets[i], kw, mode) ? 1 : 0;
  }
  std::vector<RawTweet> out;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (keep[i]) out.push_back(tweets[i]);
  }
  return out;
}

std::string normalize_text(std::string_view text) { return text::normalize(text); }

CleanTweet clean(const RawTweet& t) {
  CleanTweet c;
  static_cast<RawTweet&>(c) = t;
  c.norm_text = text::normalize(t.full_text);
  c.tokens = text::tokenize(c.norm_text);
  return c;
}

std::vector<CleanTweet> clean_all(const std::vector<RawTweet>& tweets) {
  std::vector<CleanTweet> out(tweets.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tweets.size()); ++i) out[i] = clean(tweets[i]);
  return out;
}

SpamTemplateList::SpamTemplateList(const std::vector<std::string>& templates) {
  for (const auto& raw : templates) {
    auto t = util::to_lower(text::normalize(raw));
    if (t.size() < kMinTemplateLength) {
      throw ConfigError("spam template shorter than " + std::to_string(kMinTemplateLength) +
                        " characters after normalization: '" + t + "'");
    }
    templates_.push_back(std::move(t));
  }
}

SpamTemplateList SpamTemplateList::load(const std::filesystem::path& path) {
  return SpamTemplateList(util::read_list_file(path));
}

SpamResult filter_spam(const std::vector<CleanTweet>& tweets, const SpamTemplateList& templates) {
  const auto& tpl = templates.templates();
  std::vector<int> hit(tweets.size(), -1);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tweets.size()); ++i) {
    auto lower = util::to_lower(tweets[i].norm_text);
    for (std::size_t j = 0; j < tpl.size(); ++j) {
      if (lower.find(tpl[j]) != std::string::npos) {
        hit[i] = static_cast<int>(j);
        break;
      }
    }
  }
  SpamResult r;
  r.per_template.assign(tpl.size(), 0);
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (hit[i] < 0) {
      r.kept.push_back(tweets[i]);
    } else {
      r.removed.push_back(tweets[i]);
      ++r.per_template[hit[i]];
    }
  }
  return r;
}

VolumeSeries volume_histogram(const std::vector<std::int64_t>& timestamps, std::int64_t bin_width_ms) {
  if (bin_width_ms <= 0) throw ConfigError("bin width must be positive");
  VolumeSeries s;
  s.bin_width_ms = bin_width_ms;
  if (timestamps.empty()) {
    s.empty = true;
    return s;
  }
  auto [mn, mx] = std::minmax_element(timestamps.begin(), timestamps.end());
  auto floor_div = [](std::int64_t a, std::int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); };
  std::int64_t first = floor_div(*mn, bin_width_ms);
  std::int64_t last = floor_div(*mx, bin_width_ms);
  std::vector<std::size_t> counts(static_cast<std::size_t>(last - first + 1), 0);
  for (auto ts : timestamps) ++counts[static_cast<std::size_t>(floor_div(ts, bin_width_ms) - first)];
  for (std::size_t i = 0; i < counts.size(); ++i) {
    s.bins.emplace_back((first + static_cast<std::int64_t>(i)) * bin_width_ms, counts[i]);
  }
  return s;
}

std::string volume_csv(const VolumeSeries& series) {
  std::string out = "bin_start_ms,count\n";
  for (const auto& [start, count] : series.bins) out += std::to_string(start) + "," + std::to_string(count) + "\n";
  return out;
}

}  // namespace ctscope::ingest
