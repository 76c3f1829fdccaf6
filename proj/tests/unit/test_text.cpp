#include <doctest.h>

#include <random>

#include "ctscope/text.hpp"

using namespace ctscope::text;

TEST_CASE("normalize replaces mentions and links") {
  CHECK(normalize("@alice check https://t.co/xyz now") == "user check http now");
  CHECK(normalize("no mentions here") == "no mentions here");
  CHECK(normalize("  spaced\t\tout \n text ") == "spaced out text");
  CHECK(normalize("HTTP://EXAMPLE.com/a?b=c tail") == "http tail");
  CHECK(normalize("mail me@home") == "mail meuser");
  CHECK(normalize("@@double") == "user");
  CHECK(normalize("@ alone") == "@ alone");
  CHECK(normalize("ftp://x.y stays") == "ftp://x.y stays");
  CHECK(normalize("https://") == "http");
  CHECK(normalize("") == "");
}

TEST_CASE("normalize is idempotent on random strings") {
  std::mt19937_64 rng(99);
  const std::string alphabet = "ab @_h:/tps\t\nHTTP1.";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    auto len = rng() % 40;
    for (std::size_t j = 0; j < len; ++j) s += alphabet[rng() % alphabet.size()];
    auto once = normalize(s);
    REQUIRE(normalize(once) == once);
  }
}

TEST_CASE("tokenize") {
  CHECK(tokenize("user check http") == std::vector<std::string>{"user", "check", "http"});
  CHECK(tokenize("Price: 000!!!") == std::vector<std::string>{"price", "000"});
  CHECK(tokenize("a 1 b2 I'm") == std::vector<std::string>{"1", "b2"});
  CHECK(tokenize("caf\xC3\xA9 ok") == std::vector<std::string>{"caf", "ok"});
  CHECK(tokenize("").empty());
}

TEST_CASE("tokenize is idempotent on rejoined tokens") {
  std::mt19937_64 rng(5);
  const std::string alphabet = "aZ09 .,!x";
  for (int i = 0; i < 1000; ++i) {
    std::string s;
    for (int j = 0; j < 30; ++j) s += alphabet[rng() % alphabet.size()];
    auto t = tokenize(s);
    REQUIRE(tokenize(join(t)) == t);
  }
}
