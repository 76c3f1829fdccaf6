#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ctscope/polarity.hpp"

namespace ctscope::fixture {

struct FixtureOptions {
  std::uint64_t seed = 7;
  std::size_t background_tweets = 8300;
  std::size_t spam_copies = 800;
  std::size_t noise_tweets = 500;
  std::size_t retweets = 30;
  std::size_t duplicate_lines = 12;
  std::int64_t start_ms = 1667952000000;  // 2022-11-09T00:00:00Z
  int days = 14;
};

struct Truth {
  std::vector<std::string> markers;  // index = planted topic group
  std::string spam_template;
  // Tweets that survive sanitization: planted group and sentiment.
  std::map<std::string, int> topic;
  std::map<std::string, Polarity> sentiment;
  std::vector<std::string> spam_ids;
  std::vector<std::string> noise_ids;
  std::vector<std::string> bot_ring_users;   // linear emission, reply cycle
  std::vector<std::string> zero_meta_users;  // reply cycle, no followers/friends
  std::vector<std::string> organic_users;    // bursty discussion thread
  std::vector<std::string> organic_tweets;
  std::vector<std::string> tree_tweets;      // 188-node reply tree; first is the root
  std::size_t malformed_lines = 0;
  std::size_t duplicate_lines = 0;
  std::size_t malformed_reference_pairs = 0;
  std::size_t retweets = 0;
};

struct Fixture {
  std::vector<std::string> lines;  // line-delimited records, some malformed
  std::vector<std::string> keywords;
  std::vector<std::string> spam_templates;
  Truth truth;
};

Fixture make_fixture(const FixtureOptions& opts = {});

/// Writes tweets.jsonl, keywords.txt, spam_templates.txt, truth.json and a
/// config.json whose output_dir is "out".
void write_fixture(const Fixture& f, const std::filesystem::path& dir);

}  // namespace ctscope::fixture
