#include "ctscope/fixture.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fmt/format.h>
#include <json.hpp>
#include <optional>
#include <random>

#include "ctscope/util.hpp"

namespace ctscope::fixture {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::int64_t kHour = 3600LL * 1000;
constexpr std::int64_t kDay = 24 * kHour;
constexpr std::int64_t kTwitterEpoch = 1288834974657;

const std::array<std::string_view, 6> kMarkers = {"ftx", "binance", "nft", "defi", "airdrop", "mining"};

const std::array<std::vector<std::string_view>, 6> kVocab = {{
    {"sbf", "alameda", "withdrawals", "bahamas", "customer", "deposits", "balance", "sheet", "founder", "frozen",
     "solvency", "regulators", "court", "ftt", "chapter", "bailout", "contagion", "lawyers", "depositors", "hearing"},
    {"cz", "bnb", "bsc", "reserves", "proof", "audit", "merkle", "changpeng", "wallets", "cold", "outflows", "listing",
     "futures", "spot", "usdt", "busd", "kyc", "compliance", "custody", "orderbook"},
    {"opensea", "mint", "collection", "jpeg", "artist", "pfp", "royalties", "floor", "bored", "ape", "yacht",
     "punks", "rarity", "blur", "marketplace", "gallery", "creators", "traits", "editions", "holders"},
    {"aave", "curve", "lending", "yield", "pools", "amm", "vault", "stablecoin", "dai", "maker", "collateral",
     "borrow", "apy", "protocol", "governance", "dao", "compound", "swaps", "tvl", "oracle"},
    {"claim", "eligible", "snapshot", "allocation", "retroactive", "testnet", "quest", "galxe", "layerzero", "zksync",
     "arbitrum", "optimism", "points", "farming", "whitelist", "bridge", "retro", "tasks", "sybil", "criteria"},
    {"hashrate", "asic", "miners", "difficulty", "halving", "rigs", "antminer", "electricity", "hosting", "megawatt",
     "joules", "terahash", "immersion", "cooling", "riot", "marathon", "texas", "grid", "blocks", "firmware"},
}};

// Common enough to fill the dataset-level top terms.
const std::array<std::string_view, 11> kFillers = {"crypto", "market", "today", "people", "price", "just",
                                                   "now",    "new",    "going", "week",   "everyone"};

const std::array<std::string_view, 6> kPositive = {"love", "great", "amazing", "bullish", "gains", "happy"};
const std::array<std::string_view, 6> kNegative = {"scam", "fraud", "collapse", "bankrupt", "panic", "hacked"};

const std::array<std::string_view, 20> kNoise = {"weather", "coffee", "football", "game",   "dinner",  "music", "movie",
                                                 "rain",    "park",   "weekend",  "family", "garden",  "train", "book",
                                                 "lunch",   "sunny",  "traffic",  "school", "holiday", "tea"};

const std::string kSpamTemplate = "Uniswap is being exploited by this dude";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t below(std::uint64_t n) { return g_() % n; }
  double unit() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) { return lo + static_cast<std::int64_t>(below(hi - lo)); }
  template <typename C>
  const auto& pick(const C& c) {
    return c[below(c.size())];
  }
  std::uint64_t raw() { return g_(); }

 private:
  std::mt19937_64 g_;
};

enum class Role { kBackground, kSpam, kNoise, kBot, kZeroMeta, kOrganic, kTree, kRetweet };

struct User {
  std::string id;
  std::optional<std::int64_t> friends, followers;
};

struct Draft {
  Role role = Role::kBackground;
  std::int64_t ts = 0;
  std::size_t user = 0;
  std::string text;
  int topic = -1;
  Polarity polarity = Polarity::kNeutral;
  std::optional<std::size_t> reply_to, quote_of, retweet_of;
  std::optional<std::pair<std::string, std::string>> ext_reply, ext_quote;
  bool reply_without_user = false;
  bool nested = false;
  std::int64_t counts[4] = {0, 0, 0, 0};  // quote, reply, retweet, favorite
  std::string id;
};

std::string handle(Rng& rng) {
  static const std::array<std::string_view, 8> stems = {"trader", "whale", "degen", "anon", "hodler", "chartist", "dev",
                                                        "newsbot"};
  return fmt::format("@{}{}", rng.pick(stems), rng.below(9000) + 100);
}

std::string url(Rng& rng) {
  static const char* alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string s = rng.chance(0.5) ? "https://t.co/" : "http://bit.ly/";
  for (int i = 0; i < 10; ++i) s += alphabet[rng.below(62)];
  return s;
}

Polarity draw_polarity(Rng& rng) {
  double u = rng.unit();
  return u < 0.3 ? Polarity::kPositive : (u < 0.6 ? Polarity::kNegative : Polarity::kNeutral);
}

std::string topic_text(int group, Polarity p, Rng& rng) {
  std::vector<std::string> words;
  std::string marker(kMarkers[group]);
  switch (rng.below(4)) {
    case 0: words.push_back(std::string(1, static_cast<char>(std::toupper(marker[0]))) + marker.substr(1)); break;
    case 1: {
      std::string up = marker;
      std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
      words.push_back(up);
      break;
    }
    case 2: words.push_back("#" + marker); break;
    default: words.push_back(marker);
  }
  const auto& vocab = kVocab[group];
  std::vector<std::size_t> idx(vocab.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  auto n = 4 + rng.below(3);
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    words.emplace_back(vocab[idx[i]]);
  }
  for (auto f : kFillers) {
    if (rng.chance(0.42)) words.emplace_back(f);
  }
  if (p == Polarity::kPositive) words.emplace_back(rng.pick(kPositive));
  if (p == Polarity::kNegative) words.emplace_back(rng.pick(kNegative));
  for (std::size_t i = words.size(); i > 1; --i) std::swap(words[i - 1], words[rng.below(i)]);

  std::string text;
  if (rng.chance(0.25)) text = handle(rng) + " ";
  for (std::size_t i = 0; i < words.size(); ++i) text += (i ? " " : "") + words[i];
  if (rng.chance(0.3)) text += rng.pick(std::array<std::string_view, 4>{"!", "?", ".", "!!"});
  if (rng.chance(0.2)) text += " " + url(rng);
  if (rng.chance(0.05)) text += "\n" + handle(rng);
  return text;
}

std::string noise_text(Rng& rng) {
  std::string text;
  auto n = 5 + rng.below(5);
  for (std::size_t i = 0; i < n; ++i) text += (i ? " " : "") + std::string(rng.pick(kNoise));
  if (rng.chance(0.3)) text += " " + url(rng);
  return text;
}

std::string spam_text(Rng& rng) {
  std::string body = kSpamTemplate;
  switch (rng.below(4)) {
    case 0: body = "UNISWAP is being exploited by this dude"; break;
    case 1: body = "Uniswap is being  exploited by this   dude"; break;
    default: break;
  }
  std::string text = rng.chance(0.5) ? handle(rng) + " " : "";
  text += body + std::string(rng.pick(std::array<std::string_view, 4>{"...", "!!!", ", move your funds", " \xF0\x9F\x98\xB1"}));
  return text + " " + url(rng);
}

ordered_json record(const Draft& d, const std::vector<Draft>& drafts, const std::vector<User>& users) {
  const auto& u = users[d.user];
  ordered_json j;
  if (d.nested) {
    j["id_str"] = d.id;
    j["timestamp_ms"] = std::to_string(d.ts);
    ordered_json uj;
    uj["id_str"] = u.id;
    if (u.friends) uj["friends_count"] = *u.friends;
    if (u.followers) uj["followers_count"] = *u.followers;
    j["user"] = std::move(uj);
    j["text"] = d.text;
  } else {
    j["id"] = d.id;
    j["timestamp_ms"] = d.ts;
    j["user_id"] = u.id;
    if (u.friends) j["user_friends_count"] = *u.friends;
    if (u.followers) j["user_followers_count"] = *u.followers;
    j["full_text"] = d.text;
  }
  j["quote_count"] = d.counts[0];
  j["reply_count"] = d.counts[1];
  j["retweet_count"] = d.counts[2];
  j["favorite_count"] = d.counts[3];
  std::optional<std::pair<std::string, std::string>> reply = d.ext_reply, quote = d.ext_quote;
  if (d.reply_to) reply = {{drafts[*d.reply_to].id, users[drafts[*d.reply_to].user].id}};
  if (d.quote_of) quote = {{drafts[*d.quote_of].id, users[drafts[*d.quote_of].user].id}};
  if (reply) {
    j[d.nested ? "in_reply_to_status_id_str" : "in_reply_to_status_id"] = reply->first;
    if (!d.reply_without_user) j[d.nested ? "in_reply_to_user_id_str" : "in_reply_to_user_id"] = reply->second;
  }
  if (quote) {
    if (d.nested) {
      j["quoted_status"] = {{"id_str", quote->first}, {"user", {{"id_str", quote->second}}}};
    } else {
      j["quoted_status_id"] = quote->first;
      j["quoted_status_user_id"] = quote->second;
    }
  }
  if (d.retweet_of) {
    const auto& o = drafts[*d.retweet_of];
    if (d.nested) {
      j["retweeted_status"] = {{"id_str", o.id}, {"user", {{"id_str", users[o.user].id}}}};
    } else {
      j["is_retweet"] = true;
    }
  }
  return j;
}

}  // namespace

Fixture make_fixture(const FixtureOptions& opts) {
  Rng rng(opts.seed);
  const std::int64_t t0 = opts.start_ms;
  const std::int64_t span = opts.days * kDay;

  std::vector<User> users;
  auto add_user = [&](std::string id, std::optional<std::int64_t> fr, std::optional<std::int64_t> fo) {
    users.push_back({std::move(id), fr, fo});
    return users.size() - 1;
  };
  auto lognormal = [&](double mu, double sigma) {
    // Box-Muller on our own uniform draws keeps the stream portable.
    double u1 = std::max(rng.unit(), 1e-12), u2 = rng.unit();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return static_cast<std::int64_t>(std::exp(mu + sigma * z));
  };
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < 3000; ++i) {
    bool meta = !rng.chance(0.05);
    pool.push_back(add_user(std::to_string(1400000000 + i * 37),
                            meta ? std::optional(lognormal(5.5, 1.3)) : std::nullopt,
                            meta ? std::optional(lognormal(6.0, 1.8)) : std::nullopt));
  }

  std::vector<Draft> drafts;
  auto random_counts = [&](Draft& d, double scale) {
    for (auto& c : d.counts) c = static_cast<std::int64_t>(scale * -std::log(std::max(rng.unit(), 1e-9)));
  };
  auto topic_draft = [&](Role role, int group, std::int64_t ts, std::size_t user) {
    Draft d;
    d.role = role;
    d.topic = group;
    d.polarity = draw_polarity(rng);
    d.text = topic_text(group, d.polarity, rng);
    d.ts = ts;
    d.user = user;
    d.nested = rng.chance(0.25);
    random_counts(d, 3.0);
    return d;
  };

  Fixture fx;
  auto& truth = fx.truth;
  for (auto m : kMarkers) truth.markers.emplace_back(m);
  truth.spam_template = kSpamTemplate;

  // Background discussion, denser during the first days.
  std::vector<std::int64_t> bg_ts;
  for (std::size_t i = 0; i < opts.background_tweets; ++i) {
    bg_ts.push_back(rng.chance(0.3) ? t0 + kDay + rng.between(0, 3 * kDay) : t0 + rng.between(0, span));
  }
  std::sort(bg_ts.begin(), bg_ts.end());
  std::vector<std::size_t> background;
  for (auto ts : bg_ts) {
    auto d = topic_draft(Role::kBackground, static_cast<int>(rng.below(6)), ts, rng.pick(pool));
    if (!background.empty()) {
      double u = rng.unit();
      if (u < 0.05) {
        auto target = background[rng.below(background.size())];
        if (drafts[target].user != d.user) d.reply_to = target;
      } else if (u < 0.08) {
        auto target = background[rng.below(background.size())];
        if (drafts[target].user != d.user) d.quote_of = target;
      } else if (u < 0.10) {
        d.ext_reply = {{std::to_string(1500000000000000000ULL + rng.below(1000000000)),
                        std::to_string(1700000000 + rng.below(1000000))}};
      } else if (u < 0.12) {
        d.ext_quote = {{std::to_string(1500000000000000000ULL + rng.below(1000000000)),
                        std::to_string(1700000000 + rng.below(1000000))}};
      }
    }
    drafts.push_back(std::move(d));
    background.push_back(drafts.size() - 1);
  }
  // Reference pairs without a user id, and one self-quote.
  for (int i = 0; i < 3; ++i) {
    auto& d = drafts[background[100 + 500 * i]];
    d.reply_to.reset();
    d.quote_of.reset();
    d.ext_quote.reset();
    d.ext_reply = {{std::to_string(1500000000000000000ULL + rng.below(1000000000)), ""}};
    d.reply_without_user = true;
  }
  truth.malformed_reference_pairs = 3;
  {
    auto self = background[4321];
    auto& d = drafts[self];
    d.reply_to.reset();
    d.ext_reply.reset();
    d.ext_quote.reset();
    d.quote_of = self;
  }

  for (std::size_t i = 0; i < opts.retweets; ++i) {
    auto orig = background[rng.below(background.size())];
    Draft d;
    d.role = Role::kRetweet;
    d.topic = drafts[orig].topic;
    d.polarity = drafts[orig].polarity;
    d.text = "RT " + handle(rng) + ": " + drafts[orig].text;
    d.ts = drafts[orig].ts + rng.between(60000, 6 * kHour);
    d.user = rng.pick(pool);
    d.retweet_of = orig;
    d.nested = i % 2 == 0;
    drafts.push_back(std::move(d));
  }
  truth.retweets = opts.retweets;

  for (std::size_t i = 0; i < opts.spam_copies; ++i) {
    Draft d;
    d.role = Role::kSpam;
    d.text = spam_text(rng);
    d.ts = t0 + 4 * kDay + rng.between(0, 2 * kDay);
    d.user = rng.pick(pool);
    d.nested = rng.chance(0.25);
    random_counts(d, 1.0);
    drafts.push_back(std::move(d));
  }
  for (std::size_t i = 0; i < opts.noise_tweets; ++i) {
    Draft d;
    d.role = Role::kNoise;
    d.text = noise_text(rng);
    d.ts = t0 + rng.between(0, span);
    d.user = rng.pick(pool);
    drafts.push_back(std::move(d));
  }

  // Linear-emission ring: one reply per hour for 48 hours around a cycle of 8 accounts.
  std::vector<std::size_t> bots;
  for (int i = 0; i < 8; ++i) bots.push_back(add_user(std::to_string(9100000000LL + i), 15, 4));
  {
    std::int64_t start = t0 + 3 * kDay + 7 * kHour;
    std::optional<std::size_t> prev;
    for (int j = 0; j <= 48; ++j) {
      auto d = topic_draft(Role::kBot, 4, start + j * kHour, bots[j % 8]);
      d.nested = false;
      d.reply_to = prev;
      drafts.push_back(std::move(d));
      prev = drafts.size() - 1;
    }
  }

  // Zero-metadata ring: two laps around a cycle of 6 accounts at irregular times.
  std::vector<std::size_t> zeros;
  for (int i = 0; i < 6; ++i) zeros.push_back(add_user(std::to_string(9200000000LL + i), 0, 0));
  {
    std::int64_t ts = t0 + 5 * kDay;
    std::optional<std::size_t> prev;
    for (int j = 0; j <= 12; ++j) {
      ts += rng.between(kHour, 8 * kHour);
      auto d = topic_draft(Role::kZeroMeta, static_cast<int>(rng.below(6)), ts, zeros[j % 6]);
      d.reply_to = prev;
      drafts.push_back(std::move(d));
      prev = drafts.size() - 1;
    }
  }

  // Organic thread: three bursts of uneven size separated by quiet days.
  std::vector<std::size_t> organic;
  for (int i = 0; i < 20; ++i) {
    organic.push_back(add_user(std::to_string(9300000000LL + i), lognormal(6.0, 1.0), lognormal(7.0, 1.5)));
  }
  {
    const std::array<std::pair<std::int64_t, int>, 3> bursts = {
        {{t0 + 6 * kDay, 31}, {t0 + 7 * kDay + 2 * kHour, 8}, {t0 + 9 * kDay, 21}}};
    std::vector<std::size_t> thread;
    for (const auto& [start, n] : bursts) {
      std::int64_t ts = start;
      for (int i = 0; i < n; ++i) {
        ts += rng.between(10000, 5 * 60000);
        auto d = topic_draft(Role::kOrganic, 0, ts, organic[0]);
        if (!thread.empty()) {
          auto parent = thread[thread.size() - 1 - rng.below(std::min<std::size_t>(thread.size(), 6))];
          do {
            d.user = organic[rng.below(organic.size())];
          } while (d.user == drafts[parent].user);
          d.reply_to = parent;
        }
        drafts.push_back(std::move(d));
        thread.push_back(drafts.size() - 1);
      }
    }
  }

  // Reply tree of 188 tweets by 188 distinct accounts.
  std::vector<std::size_t> tree;
  {
    std::int64_t ts = t0 + 9 * kDay + 14 * kHour;
    for (int i = 0; i < 188; ++i) {
      auto user = add_user(std::to_string(9400000000LL + i), lognormal(5.0, 1.2), lognormal(5.5, 1.5));
      ts += rng.between(20000, 4 * 60000) * (1 + i / 12);  // the thread slows down
      auto d = topic_draft(Role::kTree, 0, ts, user);
      if (i == 0) {
        d.counts[1] = 187;
        d.counts[3] = 2400;
      } else {
        double u = rng.unit();
        std::size_t k = tree.size();
        auto parent = u < 0.45 ? 0 : (u < 0.7 ? rng.below(std::min<std::size_t>(k, 10)) : rng.below(k));
        d.reply_to = tree[parent];
      }
      drafts.push_back(std::move(d));
      tree.push_back(drafts.size() - 1);
    }
  }

  // Snowflake-style ids in time order.
  std::vector<std::size_t> order(drafts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return drafts[a].ts < drafts[b].ts; });
  std::int64_t last_ts = -1;
  std::uint64_t seq = 0;
  for (auto i : order) {
    seq = drafts[i].ts == last_ts ? seq + 1 : 0;
    last_ts = drafts[i].ts;
    auto snow = (static_cast<std::uint64_t>(drafts[i].ts - kTwitterEpoch) << 22) | (seq & 0xFFF);
    drafts[i].id = std::to_string(snow);
  }

  std::vector<std::string> lines;
  std::vector<std::size_t> line_of(drafts.size());
  for (auto i : order) {
    line_of[i] = lines.size();
    lines.push_back(record(drafts[i], drafts, users).dump());
  }

  for (const auto& d : drafts) {
    switch (d.role) {
      case Role::kSpam: truth.spam_ids.push_back(d.id); break;
      case Role::kNoise: truth.noise_ids.push_back(d.id); break;
      default:
        truth.topic[d.id] = d.topic;
        truth.sentiment[d.id] = d.polarity;
    }
  }
  auto ids_of_users = [&](const std::vector<std::size_t>& us) {
    std::vector<std::string> out;
    for (auto u : us) out.push_back(users[u].id);
    return out;
  };
  truth.bot_ring_users = ids_of_users(bots);
  truth.zero_meta_users = ids_of_users(zeros);
  std::vector<std::size_t> organic_used;
  for (const auto& d : drafts) {
    if (d.role != Role::kOrganic) continue;
    truth.organic_tweets.push_back(d.id);
    organic_used.push_back(d.user);
  }
  std::sort(organic_used.begin(), organic_used.end());
  organic_used.erase(std::unique(organic_used.begin(), organic_used.end()), organic_used.end());
  truth.organic_users = ids_of_users(organic_used);
  for (auto i : tree) truth.tree_tweets.push_back(drafts[i].id);

  // Duplicated lines land after their originals; malformed lines are scattered.
  std::vector<std::string> out;
  std::vector<std::pair<std::size_t, std::string>> inserts;
  for (std::size_t i = 0; i < opts.duplicate_lines; ++i) {
    auto src = line_of[background[rng.below(background.size())]];
    inserts.emplace_back(src + 1 + rng.below(200), lines[src]);
  }
  const std::array<std::string, 5> broken = {
      R"({"id": "1590000000000000001", "timestamp_ms": 1668000000000, "full_text": "ftx truncated)",
      R"([1, 2, 3])",
      R"({"id": "1590000000000000002", "timestamp_ms": 1668000000000, "full_text": "binance news without an author"})",
      R"({"id": "1590000000000000003", "timestamp_ms": 1668000000000, "user_id": "1400000000", "full_text": "defi", "favorite_count": -4})",
      "not a json record at all",
  };
  for (std::size_t i = 0; i < broken.size(); ++i) inserts.emplace_back(1000 + i * 1700, broken[i]);
  std::stable_sort(inserts.begin(), inserts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t next = 0;
  for (std::size_t i = 0; i <= lines.size(); ++i) {
    while (next < inserts.size() && inserts[next].first <= i) out.push_back(inserts[next++].second);
    if (i < lines.size()) out.push_back(lines[i]);
  }
  truth.duplicate_lines = opts.duplicate_lines;
  truth.malformed_lines = broken.size();

  fx.lines = std::move(out);
  for (auto m : kMarkers) fx.keywords.emplace_back(m);
  fx.keywords.emplace_back("uniswap");
  fx.spam_templates = {kSpamTemplate};
  return fx;
}

void write_fixture(const Fixture& f, const std::filesystem::path& dir) {
  std::string tweets;
  for (const auto& l : f.lines) tweets += l + "\n";
  util::write_file(dir / "tweets.jsonl", tweets);

  std::string kw = "# one keyword per line\n";
  for (const auto& k : f.keywords) kw += k + "\n";
  util::write_file(dir / "keywords.txt", kw);
  std::string tpl;
  for (const auto& t : f.spam_templates) tpl += t + "\n";
  util::write_file(dir / "spam_templates.txt", tpl);

  const auto& t = f.truth;
  ordered_json tj;
  tj["markers"] = t.markers;
  tj["spam_template"] = t.spam_template;
  ordered_json topic = ordered_json::object(), sent = ordered_json::object();
  for (const auto& [id, g] : t.topic) topic[id] = g;
  for (const auto& [id, p] : t.sentiment) sent[id] = to_string(p);
  tj["topic"] = std::move(topic);
  tj["sentiment"] = std::move(sent);
  tj["spam_ids"] = t.spam_ids;
  tj["noise_ids"] = t.noise_ids;
  tj["bot_ring_users"] = t.bot_ring_users;
  tj["zero_meta_users"] = t.zero_meta_users;
  tj["organic_users"] = t.organic_users;
  tj["organic_tweets"] = t.organic_tweets;
  tj["tree_tweets"] = t.tree_tweets;
  tj["malformed_lines"] = t.malformed_lines;
  tj["duplicate_lines"] = t.duplicate_lines;
  tj["malformed_reference_pairs"] = t.malformed_reference_pairs;
  tj["retweets"] = t.retweets;
  util::write_file(dir / "truth.json", tj.dump(1) + "\n");

  ordered_json cfg;
  cfg["inputs"] = {{"tweets", "tweets.jsonl"}, {"keywords", "keywords.txt"}, {"spam_templates", "spam_templates.txt"}};
  cfg["ingest"] = {{"strict", false}, {"keyword_match", "token"}};
  cfg["embedding"] = {{"provider", "hashed"}, {"dim", 256}, {"seed", 0}};
  cfg["reduce"] = {{"latent_dim", 32}};
  cfg["cluster"] = {{"k", 6}, {"seed", 42}, {"tol", 1e-6}, {"max_iter", 300}, {"space", "latent"},
                    {"subcluster", {{"clusters", {0}}, {"k", 3}}}};
  cfg["topics"] = {{"n", 10}};
  cfg["sentiment"] = {{"provider", "lexicon"}};
  cfg["bin_width_ms"] = 12 * kHour;
  cfg["graphs"] = {{"top_components", 10}, {"curve_resample_ms", 0}};
  cfg["output_dir"] = "out";
  util::write_file(dir / "config.json", cfg.dump(2) + "\n");
}

}  // namespace ctscope::fixture
