#include "ctscope/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ctscope/error.hpp"
#include "ctscope/text.hpp"
#include "ctscope/util.hpp"

namespace ctscope::sentiment {

double SentimentLabel::signed_score() const {
  if (distribution) return (*distribution)[0] - (*distribution)[2];
  switch (label) {
    case Polarity::kPositive: return 1.0;
    case Polarity::kNegative: return -1.0;
    case Polarity::kNeutral: return 0.0;
  }
  return 0.0;
}

Polarity argmax_label(const std::array<double, 3>& d) {
  double mx = std::max({d[0], d[1], d[2]});
  int hits = (d[0] == mx) + (d[1] == mx) + (d[2] == mx);
  if (hits > 1 || d[1] == mx) return Polarity::kNeutral;
  return d[0] == mx ? Polarity::kPositive : Polarity::kNegative;
}

void SentimentLabel::validate() const {
  if (!(confidence >= 0.0 && confidence <= 1.0)) throw DataError("sentiment confidence outside [0,1]");
  if (!distribution) return;
  const auto& d = *distribution;
  for (double p : d) {
    if (!(p >= 0.0)) throw DataError("sentiment distribution has a negative component");
  }
  if (std::abs(d[0] + d[1] + d[2] - 1.0) > 1e-6) throw DataError("sentiment distribution does not sum to 1");
  if (argmax_label(d) != label) throw DataError("sentiment label disagrees with distribution argmax");
}

PrecomputedSentiment::PrecomputedSentiment(std::unordered_map<std::string, SentimentLabel> labels)
    : labels_(std::move(labels)) {
  for (const auto& [id, l] : labels_) l.validate();
}

PrecomputedSentiment PrecomputedSentiment::parse(std::string_view csv) {
  std::unordered_map<std::string, SentimentLabel> labels;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    auto f = util::csv_split(line);
    if (line_no == 1 && !f.empty() && util::trim(f[0]) == "tweet_id") continue;
    if (f.size() != 3 && f.size() != 6) throw ParseError("expected 3 or 6 sentiment fields", line_no);
    SentimentLabel l;
    auto label = parse_polarity(util::to_lower(util::trim(f[1])));
    if (!label) throw ParseError("unknown sentiment label '" + f[1] + "'", line_no);
    l.label = *label;
    auto conf = util::parse_double(util::trim(f[2]));
    if (!conf) throw ParseError("bad confidence", line_no);
    l.confidence = *conf;
    if (f.size() == 6) {
      std::array<double, 3> d{};
      for (int i = 0; i < 3; ++i) {
        auto p = util::parse_double(util::trim(f[3 + i]));
        if (!p) throw ParseError("bad probability", line_no);
        d[i] = *p;
      }
      l.distribution = d;
    }
    try {
      l.validate();
    } catch (const DataError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!labels.emplace(util::trim(f[0]), l).second) throw ParseError("duplicate tweet id", line_no);
  }
  return PrecomputedSentiment(std::move(labels));
}

PrecomputedSentiment PrecomputedSentiment::load(const std::filesystem::path& path) {
  return parse(util::read_file(path));
}

SentimentLabel PrecomputedSentiment::score(const ingest::CleanTweet& tweet) const {
  auto it = labels_.find(tweet.id);
  if (it == labels_.end()) throw CoverageError("no precomputed sentiment for tweet " + tweet.id, {tweet.id});
  return it->second;
}

void PrecomputedSentiment::check_coverage(const std::vector<ingest::CleanTweet>& tweets) const {
  std::vector<std::string> missing;
  for (const auto& t : tweets) {
    if (!labels_.count(t.id)) missing.push_back(t.id);
  }
  if (missing.empty()) return;
  std::string msg = "precomputed sentiment missing " + std::to_string(missing.size()) + " id(s):";
  for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 20); ++i) msg += " " + missing[i];
  throw CoverageError(msg, std::move(missing));
}

const Lexicon& default_lexicon() {
  static const Lexicon lex = {
      {"love", 0.8},      {"great", 0.7},     {"good", 0.5},      {"amazing", 0.8},  {"awesome", 0.8},
      {"bullish", 0.7},   {"moon", 0.6},      {"mooning", 0.7},   {"gains", 0.6},    {"profit", 0.5},
      {"win", 0.6},       {"winning", 0.6},   {"happy", 0.6},     {"excited", 0.6},  {"best", 0.6},
      {"thanks", 0.4},    {"congrats", 0.6},  {"strong", 0.4},    {"safe", 0.3},     {"hodl", 0.3},
      {"free", 0.3},      {"rewards", 0.4},   {"growth", 0.5},    {"innovation", 0.5}, {"adoption", 0.4},
      {"opportunity", 0.5}, {"pump", 0.3},    {"rally", 0.5},     {"wagmi", 0.6},    {"like", 0.2},
      {"scam", -0.9},     {"fraud", -0.9},    {"bearish", -0.7},  {"crash", -0.7},   {"dump", -0.5},
      {"collapse", -0.8}, {"bankrupt", -0.8}, {"bankruptcy", -0.8}, {"hack", -0.7},  {"hacked", -0.8},
      {"exploit", -0.7},  {"exploited", -0.7}, {"rug", -0.8},     {"rugpull", -0.9}, {"loss", -0.6},
      {"losses", -0.6},   {"lost", -0.5},     {"fear", -0.6},     {"panic", -0.7},   {"bad", -0.5},
      {"worst", -0.8},    {"hate", -0.8},     {"terrible", -0.8}, {"angry", -0.6},   {"sad", -0.5},
      {"ponzi", -0.9},    {"liquidated", -0.7}, {"insolvent", -0.8}, {"stolen", -0.8}, {"fud", -0.4},
      {"warning", -0.4},  {"risk", -0.3},     {"down", -0.3},     {"ngmi", -0.6},    {"phishing", -0.9},
  };
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  Lexicon lex;
  std::size_t n = 0;
  for (const auto& line : util::read_list_file(path)) {
    ++n;
    auto parts = util::split(line, '\t');
    if (parts.size() != 2) throw ParseError("expected term<TAB>valence", n);
    auto v = util::parse_double(util::trim(parts[1]));
    if (!v || *v < -1.0 || *v > 1.0) throw ParseError("valence must be in [-1,1]", n);
    lex[util::to_lower(util::trim(parts[0]))] = *v;
  }
  return lex;
}

double lexicon_raw_score(std::string_view text, const Lexicon& lexicon) {
  double sum = 0.0;
  std::size_t matched = 0;
  for (const auto& tok : text::tokenize(text)) {
    auto it = lexicon.find(tok);
    if (it == lexicon.end()) continue;
    sum += it->second;
    ++matched;
  }
  return sum / static_cast<double>(std::max<std::size_t>(1, matched));
}

SentimentLabel lexicon_score(std::string_view text, const Lexicon& lexicon, const LexiconOptions& opts) {
  double s = lexicon_raw_score(text, lexicon);
  double m = std::min(1.0, std::abs(s));
  SentimentLabel l;
  if (s > opts.pos_threshold) {
    l.label = Polarity::kPositive;
    l.confidence = m;
    l.distribution = std::array<double, 3>{(1 + m) / 2, (1 - m) / 3, (1 - m) / 6};
  } else if (s < opts.neg_threshold) {
    l.label = Polarity::kNegative;
    l.confidence = m;
    l.distribution = std::array<double, 3>{(1 - m) / 6, (1 - m) / 3, (1 + m) / 2};
  } else {
    l.label = Polarity::kNeutral;
    l.confidence = 1.0 - m;
    double side = m / 2;
    l.distribution = std::array<double, 3>{s > 0 ? side : 0.0, 1.0 - side, s < 0 ? side : 0.0};
  }
  return l;
}

LexiconSentiment::LexiconSentiment(Lexicon lexicon, LexiconOptions opts)
    : lexicon_(std::move(lexicon)), opts_(opts) {
  if (!(opts_.neg_threshold <= 0.0 && opts_.pos_threshold >= 0.0)) {
    throw ConfigError("lexicon thresholds must satisfy neg <= 0 <= pos");
  }
}

SentimentLabel LexiconSentiment::score(const ingest::CleanTweet& tweet) const {
  return lexicon_score(opts_.raw_text ? tweet.full_text : tweet.norm_text, lexicon_, opts_);
}

std::vector<SentimentLabel> score_all(const SentimentProvider& provider, const std::vector<ingest::CleanTweet>& tweets) {
  provider.check_coverage(tweets);
  std::vector<SentimentLabel> out(tweets.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tweets.size()); ++i) out[i] = provider.score(tweets[i]);
  return out;
}

std::string labels_csv(const std::vector<std::string>& ids, const std::vector<SentimentLabel>& labels) {
  std::string out = "tweet_id,label,confidence,p_pos,p_neu,p_neg\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& l = labels[i];
    out += util::csv_escape(ids[i]) + "," + std::string(to_string(l.label)) + "," + util::format_double(l.confidence);
    if (l.distribution) {
      for (double p : *l.distribution) out += "," + util::format_double(p);
    } else {
      out += ",,,";
    }
    out += "\n";
  }
  return out;
}

std::vector<SentimentTimeline> timeline(std::span<const std::int64_t> timestamps,
                                        std::span<const SentimentLabel> labels, std::span<const int> scopes,
                                        std::int64_t bin_width_ms) {
  if (bin_width_ms <= 0) throw ConfigError("timeline bin width must be positive");
  if (labels.size() != timestamps.size() || (!scopes.empty() && scopes.size() != timestamps.size())) {
    throw ShapeError("timeline inputs have different lengths");
  }
  std::map<int, std::size_t> scope_index{{-1, 0}};
  for (int s : scopes) {
    if (s >= 0) scope_index.emplace(s, 0);
  }
  std::size_t idx = 0;
  for (auto& [s, i] : scope_index) i = idx++;

  std::vector<SentimentTimeline> out(scope_index.size());
  for (const auto& [s, i] : scope_index) {
    out[i].scope = s;
    out[i].bin_width_ms = bin_width_ms;
  }
  if (timestamps.empty()) return out;

  auto floor_div = [](std::int64_t a, std::int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); };
  auto [mn, mx] = std::minmax_element(timestamps.begin(), timestamps.end());
  std::int64_t first = floor_div(*mn, bin_width_ms);
  auto nbins = static_cast<std::size_t>(floor_div(*mx, bin_width_ms) - first + 1);

  struct Acc {
    std::size_t n = 0, pos = 0, neu = 0, neg = 0;
    double signed_sum = 0.0;
  };
  std::vector<std::vector<Acc>> acc(out.size(), std::vector<Acc>(nbins));
  for (std::size_t t = 0; t < timestamps.size(); ++t) {
    auto b = static_cast<std::size_t>(floor_div(timestamps[t], bin_width_ms) - first);
    auto add = [&](Acc& a) {
      ++a.n;
      switch (labels[t].label) {
        case Polarity::kPositive: ++a.pos; break;
        case Polarity::kNeutral: ++a.neu; break;
        case Polarity::kNegative: ++a.neg; break;
      }
      a.signed_sum += labels[t].signed_score();
    };
    add(acc[0][b]);
    if (!scopes.empty() && scopes[t] >= 0) add(acc[scope_index.at(scopes[t])][b]);
  }
  for (std::size_t s = 0; s < out.size(); ++s) {
    for (std::size_t b = 0; b < nbins; ++b) {
      TimelineBin bin;
      bin.bin_start_ms = (first + static_cast<std::int64_t>(b)) * bin_width_ms;
      const auto& a = acc[s][b];
      bin.n = a.n;
      if (a.n > 0) {
        double n = static_cast<double>(a.n);
        bin.ratio_pos = static_cast<double>(a.pos) / n;
        bin.ratio_neu = static_cast<double>(a.neu) / n;
        bin.ratio_neg = static_cast<double>(a.neg) / n;
        bin.avg_sentiment = std::clamp(a.signed_sum / n, -1.0, 1.0);
      }
      out[s].bins.push_back(bin);
    }
  }
  return out;
}

std::string timeline_csv(const SentimentTimeline& t) {
  std::string out = "bin_start_ms,n,ratio_pos,ratio_neu,ratio_neg,avg\n";
  auto opt = [](const std::optional<double>& v) { return v ? util::format_double(*v) : std::string(); };
  for (const auto& b : t.bins) {
    out += std::to_string(b.bin_start_ms) + "," + std::to_string(b.n) + "," + opt(b.ratio_pos) + "," +
           opt(b.ratio_neu) + "," + opt(b.ratio_neg) + "," + opt(b.avg_sentiment) + "\n";
  }
  return out;
}

}  // namespace ctscope::sentiment
