#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ctscope/error.hpp"
#include "ctscope/sentiment.hpp"

using namespace ctscope;
using namespace ctscope::sentiment;

namespace {

ingest::CleanTweet tw(const std::string& id, const std::string& text) {
  ingest::RawTweet r;
  r.id = id;
  r.user_id = "u";
  r.full_text = text;
  return ingest::clean(r);
}

SentimentLabel hard(Polarity p) {
  SentimentLabel l;
  l.label = p;
  l.confidence = 1.0;
  return l;
}

}  // namespace

TEST_CASE("lexicon scoring examples") {
  const auto& lex = default_lexicon();
  auto a = lexicon_score("love great scam", lex);
  CHECK(lexicon_raw_score("love great scam", lex) == doctest::Approx(0.2));
  CHECK(a.label == Polarity::kPositive);
  CHECK(a.confidence == doctest::Approx(0.2));

  Lexicon one{{"up", 1.0}, {"down", -1.0}};
  auto b = lexicon_score("going up", one);
  CHECK(b.label == Polarity::kPositive);
  CHECK(b.confidence == 1.0);
  CHECK(b.signed_score() == doctest::Approx(1.0));
  auto c = lexicon_score("nothing here", one);
  CHECK(c.label == Polarity::kNeutral);
  CHECK(c.confidence == 1.0);
  CHECK(c.signed_score() == 0.0);
  CHECK(lexicon_score("down", one).label == Polarity::kNegative);
  CHECK(lexicon_score("up down", one).label == Polarity::kNeutral);
}

TEST_CASE("lexicon labels are valid and agree with their distribution") {
  const auto& lex = default_lexicon();
  const char* texts[] = {"", "scam", "love", "good bad", "great gains happy scam", "risk", "like", "panic fraud love"};
  for (const char* t : texts) {
    auto l = lexicon_score(t, lex);
    CHECK_NOTHROW(l.validate());
    REQUIRE(l.distribution);
    CHECK(argmax_label(*l.distribution) == l.label);
    CHECK(l.signed_score() >= -1.0);
    CHECK(l.signed_score() <= 1.0);
  }
  CHECK_THROWS_AS(LexiconSentiment(lex, LexiconOptions{.pos_threshold = -0.1}), ConfigError);
}

TEST_CASE("argmax ties resolve to neutral") {
  CHECK(argmax_label({0.5, 0.0, 0.5}) == Polarity::kNeutral);
  CHECK(argmax_label({0.4, 0.4, 0.2}) == Polarity::kNeutral);
  CHECK(argmax_label({0.5, 0.3, 0.2}) == Polarity::kPositive);
  CHECK(argmax_label({0.1, 0.3, 0.6}) == Polarity::kNegative);
}

TEST_CASE("timeline ratios and average") {
  std::vector<std::int64_t> ts{0, 10, 20, 30, 100, 110};
  std::vector<SentimentLabel> ls{hard(Polarity::kPositive), hard(Polarity::kPositive), hard(Polarity::kPositive),
                                 hard(Polarity::kPositive), hard(Polarity::kPositive), hard(Polarity::kNegative)};
  std::vector<int> scopes{0, 0, 1, 1, 0, 1};
  auto tl = timeline(ts, ls, scopes, 100);
  REQUIRE(tl.size() == 3);
  CHECK(tl[0].scope == -1);
  const auto& b0 = tl[0].bins[0];
  CHECK(b0.n == 4);
  CHECK(*b0.ratio_pos == 1.0);
  CHECK(*b0.ratio_neu == 0.0);
  CHECK(*b0.ratio_neg == 0.0);
  CHECK(*b0.avg_sentiment == 1.0);
  const auto& b1 = tl[0].bins[1];
  CHECK(b1.bin_start_ms == 100);
  CHECK(*b1.ratio_pos == 0.5);
  CHECK(*b1.ratio_neg == 0.5);
  CHECK(*b1.avg_sentiment == 0.0);
  CHECK(tl[1].scope == 0);
  CHECK(tl[2].bins.size() == 2);
  CHECK(tl[1].bins[0].n == 2);

  std::vector<std::int64_t> gap{0, 250};
  std::vector<SentimentLabel> two{hard(Polarity::kNeutral), hard(Polarity::kNeutral)};
  std::vector<int> sc{0, 0};
  auto g = timeline(gap, two, sc, 100);
  REQUIRE(g[0].bins.size() == 3);
  CHECK(g[0].bins[1].n == 0);
  CHECK_FALSE(g[0].bins[1].ratio_pos.has_value());
  CHECK(timeline_csv(g[0]).find("100,0,,,,") != std::string::npos);
  CHECK_THROWS_AS(timeline(gap, two, sc, 0), ConfigError);
}

TEST_CASE("precomputed sentiment parse and coverage") {
  auto p = PrecomputedSentiment::parse(
      "tweet_id,label,confidence,p_pos,p_neu,p_neg\n1,positive,0.9,0.9,0.05,0.05\n2,negative,0.7\n");
  CHECK(p.score(tw("1", "x")).label == Polarity::kPositive);
  CHECK(p.score(tw("2", "x")).signed_score() == -1.0);
  std::vector<ingest::CleanTweet> ts{tw("1", "a"), tw("3", "b"), tw("4", "c")};
  try {
    p.check_coverage(ts);
    FAIL("expected CoverageError");
  } catch (const CoverageError& e) {
    CHECK(e.missing() == std::vector<std::string>{"3", "4"});
  }
  CHECK_THROWS_AS(score_all(p, ts), CoverageError);
  CHECK_THROWS_AS(PrecomputedSentiment::parse("1,positive,0.9,0.2,0.6,0.2\n"), ParseError);
  CHECK_THROWS_AS(PrecomputedSentiment::parse("1,happy,0.9\n"), ParseError);
  CHECK_THROWS_AS(PrecomputedSentiment::parse("1,positive,1.5\n"), ParseError);
  CHECK_THROWS_AS(PrecomputedSentiment::parse("1,positive,0.5\n1,negative,0.5\n"), ParseError);
}

TEST_CASE("score_all with the lexicon provider") {
  std::vector<ingest::CleanTweet> ts{tw("1", "I love this"), tw("2", "total scam"), tw("3", "plain")};
  LexiconSentiment lp;
  auto ls = score_all(lp, ts);
  CHECK(ls[0].label == Polarity::kPositive);
  CHECK(ls[1].label == Polarity::kNegative);
  CHECK(ls[2].label == Polarity::kNeutral);
  auto csv = labels_csv({"1", "2", "3"}, ls);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
