#include <doctest.h>

#include <sstream>

#include "ctscope/error.hpp"
#include "ctscope/ingest.hpp"

using namespace ctscope;
using namespace ctscope::ingest;

namespace {

std::string rec(const std::string& id, std::int64_t ts, const std::string& text, const std::string& extra = "") {
  return R"({"id":")" + id + R"(","timestamp_ms":)" + std::to_string(ts) + R"(,"user_id":"u1","full_text":")" + text +
         "\"" + extra + "}";
}

RawTweet tweet(const std::string& id, const std::string& text, std::int64_t ts = 1000) {
  RawTweet t;
  t.id = id;
  t.user_id = "u";
  t.timestamp_ms = ts;
  t.full_text = text;
  return t;
}

}  // namespace

TEST_CASE("load_tweets basics") {
  std::istringstream in(rec("1", 10, "a") + "\n" + rec("2", 11, "b") + "\n\n" + rec("3", 12, "c") + "\n");
  auto r = load_tweets(in, false);
  CHECK(r.tweets.size() == 3);
  CHECK(r.report.malformed == 0);
  CHECK(r.report.lines == 3);
}

TEST_CASE("load_tweets skips malformed and duplicate lines") {
  std::istringstream in(R"({"timestamp_ms":5,"user_id":"u","full_text":"x"})"
                        "\n" +
                        rec("1", 10, "first") + "\n" + rec("1", 11, "second") + "\n" +
                        rec("2", 10, "neg", R"(,"favorite_count":-1)") + "\n" + rec("3", 0, "zero ts") + "\n");
  auto r = load_tweets(in, false);
  REQUIRE(r.tweets.size() == 1);
  CHECK(r.tweets[0].full_text == "first");
  CHECK(r.report.malformed == 3);
  CHECK(r.report.duplicates == 1);
  CHECK(r.report.malformed_lines == std::vector<std::size_t>{1, 4, 5});
}

TEST_CASE("load_tweets strict mode reports the line") {
  std::istringstream in(rec("1", 10, "ok") + "\nnot json\n");
  try {
    load_tweets(in, true);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(static_cast<int>(e.code()) == 3);
  }
}

TEST_CASE("load_tweets missing file is an I/O error") {
  CHECK_THROWS_AS(load_tweets(std::filesystem::path("/nonexistent/tweets.jsonl"), false), IoError);
}

TEST_CASE("parse_record accepts nested layouts") {
  auto t = parse_record(
      R"({"id_str":"9","timestamp_ms":"1667952000000","user":{"id":42,"friends_count":3,"followers_count":4},)"
      R"("text":"hi","quoted_status":{"id_str":"7","user":{"id_str":"8"}},"retweeted_status":{"id":1}})");
  CHECK(t.id == "9");
  CHECK(t.timestamp_ms == 1667952000000);
  CHECK(t.user_id == "42");
  CHECK(t.user_friends_count == 3);
  CHECK(t.user_followers_count == 4);
  CHECK(t.full_text == "hi");
  CHECK(t.quoted_status_id == "7");
  CHECK(t.quoted_status_user_id == "8");
  CHECK(t.is_retweet);
  CHECK(t.quote_pair_valid());

  auto dotted = parse_record(R"({"id":"1","timestamp_ms":5,"user.id":"u","full_text":"x","in_reply_to_status_id":"2"})");
  CHECK(dotted.user_id == "u");
  CHECK(dotted.malformed_reply_pair());
  CHECK_FALSE(dotted.reply_pair_valid());
}

TEST_CASE("to_record round trips") {
  auto t = tweet("5", "text with \"quotes\"", 77);
  t.user_friends_count = 1;
  t.in_reply_to_status_id = "4";
  t.in_reply_to_user_id = "u4";
  t.favorite_count = 9;
  CHECK(parse_record(to_record(t)) == t);
}

TEST_CASE("filter_by_keywords token vs substring") {
  KeywordList kw({"Crypto"});
  std::vector<RawTweet> ts{tweet("1", "I love Crypto"), tweet("2", "cryptography talk"), tweet("3", "#crypto!")};
  auto kept = filter_by_keywords(ts, kw);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].id == "1");
  CHECK(kept[1].id == "3");
  CHECK(filter_by_keywords(ts, kw, MatchMode::kSubstring).size() == 3);

  KeywordList phrase({"proof of reserves"});
  CHECK(matches_keywords(tweet("4", "Proof-of-reserves now"), phrase, MatchMode::kToken));
  CHECK_FALSE(matches_keywords(tweet("5", "proof reserves"), phrase, MatchMode::kToken));
  CHECK_THROWS_AS(KeywordList(std::vector<std::string>{}), ConfigError);
}

TEST_CASE("filter_by_keywords planted count and monotonicity") {
  std::vector<RawTweet> ts;
  for (int i = 0; i < 100; ++i) ts.push_back(tweet(std::to_string(i), i % 5 < 2 ? "the blockchain era" : "other words"));
  CHECK(filter_by_keywords(ts, KeywordList({"blockchain"})).size() == 40);
  CHECK(filter_by_keywords(ts, KeywordList({"blockchain", "words"})).size() == 100);
}

TEST_CASE("filter_spam") {
  SpamTemplateList tpl({"Uniswap is being exploited by this dude"});
  std::vector<CleanTweet> ts{clean(tweet("1", "uniswap is being exploited by this dude. why is nobody talking about this?")),
                             clean(tweet("2", "@x UNISWAP is being   exploited by this dude https://t.co/a")),
                             clean(tweet("3", "uniswap is fine"))};
  auto r = filter_spam(ts, tpl);
  CHECK(r.removed.size() == 2);
  CHECK(r.kept.size() == 1);
  CHECK(r.per_template == std::vector<std::size_t>{2});
  CHECK(filter_spam(ts, SpamTemplateList()).kept.size() == 3);
  CHECK_THROWS_AS(SpamTemplateList({"too short"}), ConfigError);
}

TEST_CASE("filter_spam planted copies") {
  SpamTemplateList tpl({"uniswap is being exploited by this dude"});
  std::vector<CleanTweet> ts;
  for (int i = 0; i < 1000; ++i) {
    ts.push_back(clean(tweet(std::to_string(i), i % 25 < 2 ? "Uniswap is being exploited by this dude!!" : "gm frens")));
  }
  auto r = filter_spam(ts, tpl);
  CHECK(r.removed.size() == 80);
  CHECK(r.kept.size() + r.removed.size() == 1000);
}

TEST_CASE("clean derives tokens from normalized text") {
  auto c = clean(tweet("1", "@bob Price: 000 https://x.y"));
  CHECK(c.norm_text == "user Price: 000 http");
  CHECK(c.tokens == std::vector<std::string>{"user", "price", "000", "http"});
}

TEST_CASE("volume_histogram") {
  const std::int64_t bin = kTwelveHoursMs;
  auto one = volume_histogram(std::vector<std::int64_t>{1, 2, 3, 4}, bin);
  REQUIRE(one.bins.size() == 1);
  CHECK(one.bins[0].second == 4);

  auto two = volume_histogram(std::vector<std::int64_t>{bin, 2 * bin}, bin);
  REQUIRE(two.bins.size() == 2);
  CHECK(two.bins[0] == std::pair<std::int64_t, std::size_t>{bin, 1});
  CHECK(two.bins[1] == std::pair<std::int64_t, std::size_t>{2 * bin, 1});

  std::vector<std::int64_t> ts;
  const std::int64_t start = 1667952000000;
  for (int i = 0; i < 10000; ++i) ts.push_back(start + static_cast<std::int64_t>(i) * (14 * 2 * bin / 10000));
  auto v = volume_histogram(ts, bin);
  CHECK(v.bins.size() == 28);
  std::size_t sum = 0;
  for (std::size_t i = 0; i < v.bins.size(); ++i) {
    sum += v.bins[i].second;
    if (i) CHECK(v.bins[i].first == v.bins[i - 1].first + bin);
  }
  CHECK(sum == 10000);
  CHECK(volume_histogram(std::vector<std::int64_t>{}, bin).empty);
  CHECK(volume_csv(two).rfind("bin_start_ms,count\n", 0) == 0);
}
