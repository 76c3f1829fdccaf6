#include "ctscope/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fmt/format.h>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ctscope/clustering.hpp"
#include "ctscope/embedding.hpp"
#include "ctscope/error.hpp"
#include "ctscope/sentiment.hpp"
#include "ctscope/topics.hpp"
#include "ctscope/util.hpp"

namespace ctscope::pipeline {

using nlohmann::json;
using nlohmann::ordered_json;

namespace paths {
fs::path timeline_cluster(int cluster) { return fs::path("sentiment") / fmt::format("timeline_cluster_{}.csv", cluster); }
fs::path graph_dir(const graphs::GraphType& t) { return fs::path("graphs") / t.str(); }
}  // namespace paths

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

const json& section(const json& j, const char* key) {
  static const json empty = json::object();
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return empty;
  if (!it->is_object()) throw ConfigError(std::string("config section '") + key + "' must be an object");
  return *it;
}

std::optional<fs::path> opt_path(const json& j, const char* key, const fs::path& base) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ConfigError(std::string("config path '") + key + "' must be a string");
  fs::path p = it->get<std::string>();
  return p.is_absolute() ? p : base / p;
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  PipelineConfig c;
  c.snapshot = ordered_json::parse(j.dump());

  const auto& in = section(j, "inputs");
  auto tweets = opt_path(in, "tweets", base_dir);
  auto keywords = opt_path(in, "keywords", base_dir);
  if (!tweets) throw ConfigError("inputs.tweets is required");
  if (!keywords) throw ConfigError("inputs.keywords is required");
  c.tweets = *tweets;
  c.keywords = *keywords;
  c.spam_templates = opt_path(in, "spam_templates", base_dir);
  c.precomputed_vectors = opt_path(in, "vectors", base_dir);
  c.precomputed_sentiment = opt_path(in, "sentiment", base_dir);
  c.lexicon = opt_path(in, "lexicon", base_dir);

  const auto& ing = section(j, "ingest");
  c.strict = get_or(ing, "strict", c.strict);
  auto match = get_or<std::string>(ing, "keyword_match", "token");
  if (match == "token") {
    c.keyword_match = ingest::MatchMode::kToken;
  } else if (match == "substring") {
    c.keyword_match = ingest::MatchMode::kSubstring;
  } else {
    throw ConfigError("ingest.keyword_match must be 'token' or 'substring'");
  }

  const auto& emb = section(j, "embedding");
  c.embedding_provider = get_or(emb, "provider", c.embedding_provider);
  c.embedding_dim = get_or(emb, "dim", c.embedding_dim);
  c.embedding_seed = get_or(emb, "seed", c.embedding_seed);

  c.latent_dim = get_or(section(j, "reduce"), "latent_dim", c.latent_dim);

  const auto& cl = section(j, "cluster");
  c.k = get_or(cl, "k", c.k);
  c.seed = get_or(cl, "seed", c.seed);
  c.tol = get_or(cl, "tol", c.tol);
  c.max_iter = get_or(cl, "max_iter", c.max_iter);
  c.cluster_space = get_or(cl, "space", c.cluster_space);
  const auto& sub = section(cl, "subcluster");
  c.subcluster_ids = get_or(sub, "clusters", c.subcluster_ids);
  c.subcluster_k = get_or(sub, "k", c.subcluster_k);

  c.keywords_n = get_or(section(j, "topics"), "n", c.keywords_n);

  const auto& se = section(j, "sentiment");
  c.sentiment_provider = get_or(se, "provider", c.sentiment_provider);
  c.pos_threshold = get_or(se, "pos_threshold", c.pos_threshold);
  c.neg_threshold = get_or(se, "neg_threshold", c.neg_threshold);
  c.sentiment_raw_text = get_or(se, "raw_text", c.sentiment_raw_text);

  c.bin_width_ms = get_or(j, "bin_width_ms", c.bin_width_ms);

  const auto& gr = section(j, "graphs");
  c.top_components = get_or(gr, "top_components", c.top_components);
  c.curve_resample_ms = get_or(gr, "curve_resample_ms", c.curve_resample_ms);
  const auto& bot = section(gr, "bot");
  c.bot.linear_min_score = get_or(bot, "linear_min_score", c.bot.linear_min_score);
  c.bot.linear_min_points = get_or(bot, "linear_min_points", c.bot.linear_min_points);
  c.bot.flat_tolerance = get_or(bot, "flat_tolerance", c.bot.flat_tolerance);
  c.bot.burst_max_span_ms = get_or(bot, "burst_max_span_ms", c.bot.burst_max_span_ms);
  c.bot.burst_min_interactions = get_or(bot, "burst_min_interactions", c.bot.burst_min_interactions);

  if (auto out = opt_path(j, "output_dir", base_dir)) c.output_dir = *out;
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  json j;
  try {
    j = json::parse(util::read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse config " + path.string() + ": " + e.what());
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return from_json(j, path.parent_path());
}

void PipelineConfig::validate() const {
  auto must_exist = [](const fs::path& p, const char* what) {
    if (!fs::exists(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
  };
  must_exist(tweets, "tweets file");
  must_exist(keywords, "keyword list");
  if (spam_templates) must_exist(*spam_templates, "spam template list");
  if (lexicon) must_exist(*lexicon, "lexicon");
  if (embedding_provider == "precomputed") {
    if (!precomputed_vectors) throw ConfigError("embedding.provider 'precomputed' needs inputs.vectors");
    must_exist(*precomputed_vectors, "precomputed vectors");
  } else if (embedding_provider != "hashed") {
    throw ConfigError("embedding.provider must be 'hashed' or 'precomputed'");
  }
  if (sentiment_provider == "precomputed") {
    if (!precomputed_sentiment) throw ConfigError("sentiment.provider 'precomputed' needs inputs.sentiment");
    must_exist(*precomputed_sentiment, "precomputed sentiment");
  } else if (sentiment_provider != "lexicon") {
    throw ConfigError("sentiment.provider must be 'lexicon' or 'precomputed'");
  }
  if (embedding_dim < 8 || embedding_dim > 4096) throw ConfigError("embedding.dim must be in [8, 4096]");
  if (latent_dim < 1) throw ConfigError("reduce.latent_dim must be >= 1");
  if (embedding_provider == "hashed" && latent_dim > embedding_dim) {
    throw ConfigError("reduce.latent_dim exceeds embedding.dim");
  }
  if (cluster_space != "latent" && cluster_space != "raw") throw ConfigError("cluster.space must be 'latent' or 'raw'");
  if (k < 1) throw ConfigError("cluster.k must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("cluster.tol must be positive");
  if (max_iter < 1) throw ConfigError("cluster.max_iter must be >= 1");
  if (subcluster_k < 1) throw ConfigError("cluster.subcluster.k must be >= 1");
  for (int id : subcluster_ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= k) throw ConfigError("cluster.subcluster.clusters out of range");
  }
  if (keywords_n < 1) throw ConfigError("topics.n must be >= 1");
  if (!(neg_threshold <= 0.0 && pos_threshold >= 0.0)) throw ConfigError("sentiment thresholds must satisfy neg <= 0 <= pos");
  if (bin_width_ms <= 0) throw ConfigError("bin_width_ms must be positive");
  if (curve_resample_ms < 0) throw ConfigError("graphs.curve_resample_ms must be >= 0");
  if (bot.linear_min_score < 0.0 || bot.linear_min_score > 1.0) throw ConfigError("graphs.bot.linear_min_score must be in [0,1]");
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> s = {Stage::kIngest, Stage::kEmbed,     Stage::kReduce, Stage::kCluster,
                                       Stage::kTopics, Stage::kSentiment, Stage::kGraphs, Stage::kReport};
  return s;
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kIngest: return "ingest";
    case Stage::kEmbed: return "embed";
    case Stage::kReduce: return "reduce";
    case Stage::kCluster: return "cluster";
    case Stage::kTopics: return "topics";
    case Stage::kSentiment: return "sentiment";
    case Stage::kGraphs: return "graphs";
    case Stage::kReport: return "report";
  }
  return "";
}

std::optional<Stage> parse_stage(std::string_view s) {
  for (auto st : all_stages()) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::vector<Stage> parse_stages(std::string_view list) {
  if (util::trim(list) == "all") return all_stages();
  std::set<Stage> chosen;
  for (const auto& part : util::split(list, ',')) {
    auto name = util::trim(part);
    if (name.empty()) continue;
    auto st = parse_stage(name);
    if (!st) throw ConfigError("unknown stage '" + name + "'");
    chosen.insert(*st);
  }
  if (chosen.empty()) throw ConfigError("no stages selected");
  return {chosen.begin(), chosen.end()};
}

const StageRecord* RunManifest::stage(std::string_view name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ordered_json RunManifest::to_json() const {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config;
  j["counts"] = {{"raw", counts.raw},
                 {"keyword_kept", counts.keyword_kept},
                 {"spam_removed", counts.spam_removed},
                 {"final", counts.final_count}};
  auto arr = ordered_json::array();
  for (const auto& s : stages) {
    ordered_json st;
    st["name"] = s.name;
    ordered_json in = ordered_json::object(), out = ordered_json::object();
    for (const auto& [p, d] : s.inputs) in[p] = d;
    for (const auto& [p, d] : s.outputs) out[p] = d;
    st["inputs"] = std::move(in);
    st["outputs"] = std::move(out);
    st["duration_ms"] = s.duration_ms;
    arr.push_back(std::move(st));
  }
  j["stages"] = std::move(arr);
  return j;
}

RunManifest RunManifest::from_json(const ordered_json& j) {
  RunManifest m;
  m.config = j.at("config");
  const auto& c = j.at("counts");
  m.counts = {c.at("raw"), c.at("keyword_kept"), c.at("spam_removed"), c.at("final")};
  for (const auto& st : j.at("stages")) {
    StageRecord r;
    r.name = st.at("name");
    for (const auto& [p, d] : st.at("inputs").items()) r.inputs.emplace_back(p, d.get<std::string>());
    for (const auto& [p, d] : st.at("outputs").items()) r.outputs.emplace_back(p, d.get<std::string>());
    r.duration_ms = st.at("duration_ms");
    m.stages.push_back(std::move(r));
  }
  return m;
}

RunManifest load_manifest(const fs::path& output_dir) {
  auto path = output_dir / paths::kManifest;
  if (!fs::exists(path)) throw DependencyError("manifest", "no manifest in " + output_dir.string());
  return RunManifest::from_json(ordered_json::parse(util::read_file(path)));
}

std::vector<ingest::CleanTweet> load_clean_tweets(const fs::path& output_dir) {
  return ingest::clean_all(ingest::load_tweets(output_dir / paths::kTweets, true).tweets);
}

std::vector<Assignment> load_assignments(const fs::path& path) {
  std::istringstream in(util::read_file(path));
  std::string line;
  std::getline(in, line);
  std::vector<Assignment> out;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto f = util::csv_split(line);
    if (f.size() != 3) throw ParseError("assignments: expected 3 fields", n);
    Assignment a;
    a.tweet_id = f[0];
    auto c = util::parse_int(f[1]);
    if (!c) throw ParseError("assignments: bad cluster id", n);
    a.cluster = static_cast<int>(*c);
    if (!f[2].empty()) a.subcluster = static_cast<int>(util::parse_int(f[2]).value_or(-1));
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<std::pair<std::string, sentiment::SentimentLabel>> load_labels(const fs::path& path) {
  std::istringstream in(util::read_file(path));
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<std::string, sentiment::SentimentLabel>> out;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto f = util::csv_split(line);
    if (f.size() != 6) throw ParseError("labels: expected 6 fields", n);
    sentiment::SentimentLabel l;
    auto p = parse_polarity(f[1]);
    auto conf = util::parse_double(f[2]);
    if (!p || !conf) throw ParseError("labels: bad label or confidence", n);
    l.label = *p;
    l.confidence = *conf;
    if (!f[3].empty()) {
      std::array<double, 3> d{};
      for (int i = 0; i < 3; ++i) {
        auto v = util::parse_double(f[3 + i]);
        if (!v) throw ParseError("labels: bad probability", n);
        d[i] = *v;
      }
      l.distribution = d;
    }
    out.emplace_back(f[0], l);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

class StageRun {
 public:
  StageRun(Stage stage, fs::path out_dir) : stage_(stage), out_(std::move(out_dir)), start_(Clock::now()) {
    record_.name = std::string(to_string(stage));
  }

  void clean_dir(const fs::path& rel) { fs::remove_all(out_ / rel); }

  void input_file(const fs::path& abs) { record_.inputs.emplace_back(abs.string(), util::sha256_file(abs)); }

  // A persisted artifact of an earlier stage; its absence is a dependency error.
  fs::path require(const fs::path& rel, Stage producer) {
    auto abs = out_ / rel;
    if (!fs::exists(abs)) {
      throw DependencyError(record_.name, "missing artifact " + rel.generic_string() + " (run stage '" +
                                               std::string(to_string(producer)) + "' first)");
    }
    record_.inputs.emplace_back(rel.generic_string(), util::sha256_file(abs));
    return abs;
  }

  void write(const fs::path& rel, std::string_view content) {
    util::write_file(out_ / rel, content);
    record_.outputs.emplace_back(rel.generic_string(), util::sha256_hex(content));
  }

  const fs::path& out() const { return out_; }

  StageRecord finish() {
    record_.duration_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    return std::move(record_);
  }

 private:
  Stage stage_;
  fs::path out_;
  Clock::time_point start_;
  StageRecord record_;
};

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

StageRecord run_ingest(const PipelineConfig& c, Counts& counts) {
  StageRun run(Stage::kIngest, c.output_dir);
  run.clean_dir("ingest");
  run.input_file(c.tweets);
  run.input_file(c.keywords);
  if (c.spam_templates) run.input_file(*c.spam_templates);

  auto loaded = ingest::load_tweets(c.tweets, c.strict);
  auto kw = ingest::KeywordList::load(c.keywords);
  auto templates = c.spam_templates ? ingest::SpamTemplateList::load(*c.spam_templates) : ingest::SpamTemplateList();
  auto kept = ingest::filter_by_keywords(loaded.tweets, kw, c.keyword_match);
  auto spam = ingest::filter_spam(ingest::clean_all(kept), templates);

  std::string records;
  for (const auto& t : spam.kept) records += ingest::to_record(t) + "\n";
  run.write(paths::kTweets, records);

  std::unordered_map<std::string, std::string_view> status;
  for (const auto& t : loaded.tweets) status[t.id] = "keyword_dropped";
  for (const auto& t : spam.kept) status[t.id] = "kept";
  for (const auto& t : spam.removed) status[t.id] = "spam_removed";
  std::string status_csv = "tweet_id,timestamp_ms,status\n";
  for (const auto& t : loaded.tweets) {
    status_csv += util::csv_escape(t.id) + "," + std::to_string(t.timestamp_ms) + "," + std::string(status[t.id]) + "\n";
  }
  run.write(paths::kStatus, status_csv);
  run.write(paths::kVolumeRaw, ingest::volume_csv(ingest::volume_histogram(loaded.tweets, c.bin_width_ms)));
  run.write(paths::kVolumeClean, ingest::volume_csv(ingest::volume_histogram(spam.kept, c.bin_width_ms)));

  std::string spam_csv = "template,removed\n";
  for (std::size_t i = 0; i < templates.templates().size(); ++i) {
    spam_csv += util::csv_escape(templates.templates()[i]) + "," + std::to_string(spam.per_template[i]) + "\n";
  }
  run.write(paths::kSpamReport, spam_csv);

  counts.raw = loaded.tweets.size();
  counts.keyword_kept = kept.size();
  counts.spam_removed = spam.removed.size();
  counts.final_count = spam.kept.size();

  std::size_t retweets = 0;
  for (const auto& t : spam.kept) retweets += t.is_retweet ? 1 : 0;
  ordered_json rep;
  rep["schema_version"] = kSchemaVersion;
  rep["lines"] = loaded.report.lines;
  rep["loaded"] = loaded.report.loaded;
  rep["malformed"] = loaded.report.malformed;
  rep["malformed_lines"] = loaded.report.malformed_lines;
  rep["duplicates"] = loaded.report.duplicates;
  rep["malformed_reference_pairs"] = loaded.report.malformed_reference_pairs;
  rep["keyword_match"] = c.keyword_match == ingest::MatchMode::kToken ? "token" : "substring";
  rep["raw"] = counts.raw;
  rep["keyword_kept"] = counts.keyword_kept;
  rep["spam_removed"] = counts.spam_removed;
  rep["final"] = counts.final_count;
  rep["retweets_in_final"] = retweets;
  run.write(paths::kIngestReport, dump(rep));
  return run.finish();
}

StageRecord run_embed(const PipelineConfig& c) {
  StageRun run(Stage::kEmbed, c.output_dir);
  run.require(paths::kTweets, Stage::kIngest);
  run.clean_dir("embed");
  auto tweets = load_clean_tweets(c.output_dir);
  std::unique_ptr<embedding::EmbeddingProvider> provider;
  if (c.embedding_provider == "precomputed") {
    run.input_file(*c.precomputed_vectors);
    provider = std::make_unique<embedding::PrecomputedProvider>(
        embedding::PrecomputedProvider::load(*c.precomputed_vectors));
  } else {
    provider = std::make_unique<embedding::HashedNgramProvider>(c.embedding_dim, c.embedding_seed);
  }
  auto m = embedding::embed_corpus(tweets, *provider);
  auto zero = m.zero_rows();
  run.write(paths::kEmbeddings, embedding::to_emb1(m));
  ordered_json rep;
  rep["schema_version"] = kSchemaVersion;
  rep["provider"] = provider->name();
  rep["dim"] = m.dim;
  rep["seed"] = c.embedding_seed;
  rep["rows"] = m.rows();
  rep["zero_vector_ids"] = zero;
  run.write(paths::kEmbedReport, dump(rep));
  return run.finish();
}

embedding::EmbeddingMatrix nonzero_embeddings(const fs::path& abs) {
  auto m = embedding::load_matrix(abs);
  return m.without(m.zero_rows());
}

StageRecord run_reduce(const PipelineConfig& c) {
  StageRun run(Stage::kReduce, c.output_dir);
  auto emb_path = run.require(paths::kEmbeddings, Stage::kEmbed);
  run.clean_dir("reduce");
  auto m = nonzero_embeddings(emb_path);
  auto model = embedding::fit_reducer(m, c.latent_dim);
  run.write(paths::kReducer, embedding::to_bytes(model));
  run.write(paths::kLatent, embedding::to_emb1(embedding::encode_matrix(model, m)));
  double total = model.eigenvalues.sum();
  double kept = model.eigenvalues.head(static_cast<Eigen::Index>(model.latent_dim)).sum();
  ordered_json rep;
  rep["schema_version"] = kSchemaVersion;
  rep["input_dim"] = model.input_dim;
  rep["latent_dim"] = model.latent_dim;
  rep["rows"] = m.rows();
  rep["train_mse"] = model.train_mse;
  rep["explained_variance_ratio"] = total > 0 ? kept / total : 1.0;
  std::vector<double> top;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(model.latent_dim); ++i) top.push_back(model.eigenvalues[i]);
  rep["eigenvalues"] = top;
  run.write(paths::kReduceReport, dump(rep));
  return run.finish();
}

StageRecord run_cluster(const PipelineConfig& c) {
  StageRun run(Stage::kCluster, c.output_dir);
  embedding::EmbeddingMatrix data;
  if (c.cluster_space == "raw") {
    data = nonzero_embeddings(run.require(paths::kEmbeddings, Stage::kEmbed));
  } else {
    data = embedding::load_matrix(run.require(paths::kLatent, Stage::kReduce));
  }
  run.clean_dir("cluster");
  clustering::KMeansOptions opts{c.k, c.seed, c.tol, c.max_iter};
  auto model = clustering::kmeans_fit(data, opts);
  std::vector<clustering::ClusterModel> subs;
  for (int id : c.subcluster_ids) {
    clustering::KMeansOptions sub_opts{c.subcluster_k, c.seed, c.tol, c.max_iter};
    subs.push_back(clustering::subcluster(model, id, data, sub_opts));
  }
  run.write(paths::kClusterModel, clustering::to_bytes(model));
  for (const auto& s : subs) {
    run.write(fs::path("cluster") / fmt::format("subcluster_{}.clm", *s.parent_cluster), clustering::to_bytes(s));
  }
  run.write(paths::kAssignments, clustering::assignments_csv(model, subs));
  ordered_json rep;
  rep["schema_version"] = kSchemaVersion;
  rep["space"] = c.cluster_space;
  rep["k"] = model.k;
  rep["seed"] = model.seed;
  rep["inertia"] = model.inertia;
  rep["iterations_run"] = model.iterations_run;
  rep["sizes"] = model.sizes();
  rep["inertia_trace"] = model.inertia_trace;
  auto sub_arr = ordered_json::array();
  for (const auto& s : subs) {
    sub_arr.push_back({{"parent_cluster", *s.parent_cluster}, {"k", s.k}, {"sizes", s.sizes()}, {"inertia", s.inertia}});
  }
  rep["subclusters"] = std::move(sub_arr);
  run.write(paths::kClusterReport, dump(rep));
  return run.finish();
}

// Cluster id per tweet (parallel to `tweets`); -1 when the tweet was not clustered.
std::vector<int> cluster_per_tweet(const std::vector<ingest::CleanTweet>& tweets, const std::vector<Assignment>& as) {
  std::unordered_map<std::string, int> by_id;
  for (const auto& a : as) by_id.emplace(a.tweet_id, a.cluster);
  std::vector<int> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) {
    auto it = by_id.find(t.id);
    out.push_back(it == by_id.end() ? -1 : it->second);
  }
  return out;
}

std::vector<std::vector<std::string>> token_docs(const std::vector<ingest::CleanTweet>& tweets) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(tweets.size());
  for (const auto& t : tweets) docs.push_back(t.tokens);
  return docs;
}

StageRecord run_topics(const PipelineConfig& c) {
  StageRun run(Stage::kTopics, c.output_dir);
  run.require(paths::kTweets, Stage::kIngest);
  auto as_path = run.require(paths::kAssignments, Stage::kCluster);
  run.clean_dir("topics");
  auto tweets = load_clean_tweets(c.output_dir);
  auto assign = cluster_per_tweet(tweets, load_assignments(as_path));
  auto model = topics::fit_tfidf(token_docs(tweets));
  auto ck = topics::cluster_keywords(model, assign, c.k, c.keywords_n);
  std::vector<topics::KeywordReport> reports{ck.overall};
  reports.insert(reports.end(), ck.clusters.begin(), ck.clusters.end());
  run.write(paths::kVocabulary, topics::vocabulary_tsv(model));
  run.write(paths::kKeywordsCsv, topics::reports_csv(reports));
  run.write(paths::kKeywordsJson, topics::reports_json(reports));
  return run.finish();
}

std::vector<sentiment::SentimentLabel> labels_for(const std::vector<ingest::CleanTweet>& tweets, const fs::path& path) {
  std::unordered_map<std::string, sentiment::SentimentLabel> by_id;
  for (auto& [id, l] : load_labels(path)) by_id.emplace(id, l);
  std::vector<sentiment::SentimentLabel> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) {
    auto it = by_id.find(t.id);
    if (it == by_id.end()) throw CoverageError("no persisted sentiment label for tweet " + t.id, {t.id});
    out.push_back(it->second);
  }
  return out;
}

StageRecord run_sentiment(const PipelineConfig& c) {
  StageRun run(Stage::kSentiment, c.output_dir);
  run.require(paths::kTweets, Stage::kIngest);
  auto as_path = run.require(paths::kAssignments, Stage::kCluster);
  run.clean_dir("sentiment");
  auto tweets = load_clean_tweets(c.output_dir);
  std::unique_ptr<sentiment::SentimentProvider> provider;
  if (c.sentiment_provider == "precomputed") {
    run.input_file(*c.precomputed_sentiment);
    provider = std::make_unique<sentiment::PrecomputedSentiment>(
        sentiment::PrecomputedSentiment::load(*c.precomputed_sentiment));
  } else {
    if (c.lexicon) run.input_file(*c.lexicon);
    sentiment::LexiconOptions opts{c.pos_threshold, c.neg_threshold, c.sentiment_raw_text};
    provider = std::make_unique<sentiment::LexiconSentiment>(
        c.lexicon ? sentiment::load_lexicon(*c.lexicon) : sentiment::default_lexicon(), opts);
  }
  auto labels = sentiment::score_all(*provider, tweets);
  std::vector<std::string> ids;
  std::vector<std::int64_t> ts;
  for (const auto& t : tweets) {
    ids.push_back(t.id);
    ts.push_back(t.timestamp_ms);
  }
  run.write(paths::kLabels, sentiment::labels_csv(ids, labels));
  auto scopes = cluster_per_tweet(tweets, load_assignments(as_path));
  for (const auto& tl : sentiment::timeline(ts, labels, scopes, c.bin_width_ms)) {
    run.write(tl.scope < 0 ? paths::kTimelineOverall : paths::timeline_cluster(tl.scope), sentiment::timeline_csv(tl));
  }
  return run.finish();
}

StageRecord run_graphs(const PipelineConfig& c) {
  StageRun run(Stage::kGraphs, c.output_dir);
  run.require(paths::kTweets, Stage::kIngest);
  auto labels_path = run.require(paths::kLabels, Stage::kSentiment);
  run.clean_dir("graphs");
  auto tweets = load_clean_tweets(c.output_dir);
  auto labels = labels_for(tweets, labels_path);

  for (const auto& type : graphs::all_graph_types()) {
    auto dir = paths::graph_dir(type);
    graphs::BuildReport br;
    auto g = graphs::build_graph(tweets, type, labels, &br);
    run.write(dir / "stats.json", graphs::degree_stats_json(type, graphs::degree_stats(g)));
    run.write(dir / "graph.graphml", graphs::to_graphml(g, {graphs::ComponentKind::kWcc, std::nullopt}));
    run.write(dir / "graph.dot", graphs::to_dot(g, {graphs::ComponentKind::kWcc, std::nullopt}));
    if (g.node_count() > 0) {
      run.write(dir / "largest_wcc.graphml", graphs::to_graphml(g, {graphs::ComponentKind::kWcc, 1}));
    }
    ordered_json rep;
    rep["schema_version"] = kSchemaVersion;
    rep["retweets_skipped"] = br.retweets_skipped;
    rep["malformed_references"] = br.malformed_references;
    rep["self_references"] = br.self_references;
    rep["external_targets"] = br.external_targets;
    run.write(dir / "build_report.json", dump(rep));

    for (auto kind : {graphs::ComponentKind::kWcc, graphs::ComponentKind::kScc}) {
      auto comps = kind == graphs::ComponentKind::kWcc ? graphs::weakly_connected_components(g)
                                                       : graphs::strongly_connected_components(g);
      std::string ks(graphs::to_string(kind));
      std::vector<graphs::ComponentProfile> profiles;
      std::string csv = graphs::profile_csv_header();
      for (std::size_t i = 0; i < std::min(c.top_components, comps.size()); ++i) {
        auto p = graphs::profile_component(g, comps[i], c.bot);
        csv += graphs::profile_csv_row(type, p);
        auto curve = c.curve_resample_ms > 0 ? graphs::resample_curve(p.temporal_curve, c.curve_resample_ms)
                                             : p.temporal_curve;
        run.write(dir / "curves" / fmt::format("{}_{}.csv", ks, p.component.rank), graphs::curve_csv(curve));
        profiles.push_back(std::move(p));
      }
      run.write(dir / fmt::format("components_{}.csv", ks), csv);
      run.write(dir / fmt::format("components_{}.json", ks), graphs::profiles_json(type, g, profiles));
      run.write(dir / fmt::format("members_{}.csv", ks), graphs::membership_csv(g, comps));
    }
  }
  return run.finish();
}

StageRecord run_report(const PipelineConfig& c, const Counts& counts) {
  StageRun run(Stage::kReport, c.output_dir);
  run.require(paths::kTweets, Stage::kIngest);
  auto as_path = run.require(paths::kAssignments, Stage::kCluster);
  auto kw_path = run.require(paths::kKeywordsJson, Stage::kTopics);
  auto labels_path = run.require(paths::kLabels, Stage::kSentiment);
  std::vector<fs::path> stats_paths;
  for (const auto& type : graphs::all_graph_types()) {
    stats_paths.push_back(run.require(paths::graph_dir(type) / "stats.json", Stage::kGraphs));
    run.require(paths::graph_dir(type) / "components_scc.json", Stage::kGraphs);
    run.require(paths::graph_dir(type) / "components_wcc.json", Stage::kGraphs);
  }
  run.clean_dir("report");

  auto tweets = load_clean_tweets(c.output_dir);
  auto assignments = load_assignments(as_path);
  auto assign = cluster_per_tweet(tweets, assignments);
  auto labels = labels_for(tweets, labels_path);
  std::vector<Polarity> pol;
  for (const auto& l : labels) pol.push_back(l.label);

  auto model = topics::fit_tfidf(token_docs(tweets));
  auto sk = topics::sentiment_keywords(model, assign, pol, c.k, c.keywords_n);
  std::vector<topics::KeywordReport> reports;
  for (const auto& s : sk) {
    reports.push_back(s.overall);
    reports.insert(reports.end(), s.clusters.begin(), s.clusters.end());
  }
  run.write(paths::kSentimentKeywordsCsv, topics::reports_csv(reports));
  run.write(paths::kSentimentKeywordsJson, topics::reports_json(reports));

  auto kw = topics::reports_from_json(util::read_file(kw_path));
  std::vector<std::size_t> sizes(c.k, 0);
  std::vector<std::array<std::size_t, 3>> sent(c.k, {0, 0, 0});
  std::map<int, std::map<int, std::size_t>> sub_sizes;
  std::size_t unclustered = 0;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (assign[i] < 0) {
      ++unclustered;
      continue;
    }
    ++sizes.at(static_cast<std::size_t>(assign[i]));
    ++sent[static_cast<std::size_t>(assign[i])][static_cast<std::size_t>(pol[i])];
  }
  for (const auto& a : assignments) {
    if (a.subcluster) ++sub_sizes[a.cluster][*a.subcluster];
  }
  ordered_json clusters;
  clusters["schema_version"] = kSchemaVersion;
  clusters["k"] = c.k;
  clusters["clustered_total"] = tweets.size() - unclustered;
  clusters["unclustered"] = unclustered;
  auto arr = ordered_json::array();
  for (std::size_t ci = 0; ci < c.k; ++ci) {
    ordered_json cj;
    cj["cluster_id"] = ci;
    cj["size"] = sizes[ci];
    auto terms = ordered_json::array();
    for (const auto& r : kw) {
      if (r.scope.cluster == static_cast<int>(ci) && !r.scope.label) {
        for (const auto& t : r.ranked_terms) terms.push_back(t.term);
      }
    }
    cj["top_terms"] = std::move(terms);
    cj["sentiment"] = {{"positive", sent[ci][0]}, {"neutral", sent[ci][1]}, {"negative", sent[ci][2]}};
    auto subs = ordered_json::array();
    for (const auto& [sid, n] : sub_sizes[static_cast<int>(ci)]) subs.push_back({{"subcluster_id", sid}, {"size", n}});
    cj["subclusters"] = std::move(subs);
    arr.push_back(std::move(cj));
  }
  clusters["clusters"] = std::move(arr);
  run.write(paths::kClustersSummary, dump(clusters));

  ordered_json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["counts"] = {{"raw", counts.raw},
                       {"keyword_kept", counts.keyword_kept},
                       {"spam_removed", counts.spam_removed},
                       {"final", counts.final_count}};
  auto gs = ordered_json::array();
  auto flagged = ordered_json::array();
  for (std::size_t i = 0; i < graphs::all_graph_types().size(); ++i) {
    const auto& type = graphs::all_graph_types()[i];
    auto st = json::parse(util::read_file(stats_paths[i]));
    gs.push_back({{"graph", type.str()}, {"n_nodes", st["n_nodes"]}, {"n_edges", st["n_edges"]}});
    for (const auto* kind : {"scc", "wcc"}) {
      auto profiles =
          json::parse(util::read_file(c.output_dir / paths::graph_dir(type) / fmt::format("components_{}.json", kind)));
      for (const auto& p : profiles) {
        if (p["bot_flags"].empty()) continue;
        flagged.push_back({{"graph", type.str()}, {"kind", kind}, {"rank", p["rank"]}, {"bot_flags", p["bot_flags"]}});
      }
    }
  }
  summary["graphs"] = std::move(gs);
  summary["flagged_components"] = std::move(flagged);
  run.write(paths::kSummary, dump(summary));
  return run.finish();
}

Counts counts_from_report(const fs::path& out_dir) {
  Counts counts;
  auto path = out_dir / paths::kIngestReport;
  if (!fs::exists(path)) return counts;
  auto rep = json::parse(util::read_file(path));
  counts.raw = rep.at("raw");
  counts.keyword_kept = rep.at("keyword_kept");
  counts.spam_removed = rep.at("spam_removed");
  counts.final_count = rep.at("final");
  return counts;
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& config, const std::vector<Stage>& stages) {
  config.validate();
  fs::create_directories(config.output_dir);

  RunManifest manifest;
  if (fs::exists(config.output_dir / paths::kManifest)) manifest = load_manifest(config.output_dir);
  manifest.config = config.snapshot;
  manifest.counts = counts_from_report(config.output_dir);

  std::set<Stage> chosen(stages.begin(), stages.end());
  for (auto stage : all_stages()) {
    if (!chosen.count(stage)) continue;
    StageRecord rec;
    try {
      switch (stage) {
        case Stage::kIngest: rec = run_ingest(config, manifest.counts); break;
        case Stage::kEmbed: rec = run_embed(config); break;
        case Stage::kReduce: rec = run_reduce(config); break;
        case Stage::kCluster: rec = run_cluster(config); break;
        case Stage::kTopics: rec = run_topics(config); break;
        case Stage::kSentiment: rec = run_sentiment(config); break;
        case Stage::kGraphs: rec = run_graphs(config); break;
        case Stage::kReport: rec = run_report(config, manifest.counts); break;
      }
    } catch (const DependencyError&) {
      throw;
    } catch (const ConfigError& e) {
      throw ConfigError("stage '" + std::string(to_string(stage)) + "': " + e.what());
    } catch (const DataError& e) {
      throw DataError("stage '" + std::string(to_string(stage)) + "': " + e.what());
    }
    auto it = std::find_if(manifest.stages.begin(), manifest.stages.end(),
                           [&](const StageRecord& s) { return s.name == rec.name; });
    if (it != manifest.stages.end()) {
      *it = std::move(rec);
    } else {
      manifest.stages.push_back(std::move(rec));
    }
    std::sort(manifest.stages.begin(), manifest.stages.end(), [](const StageRecord& a, const StageRecord& b) {
      return *parse_stage(a.name) < *parse_stage(b.name);
    });
    util::write_file(config.output_dir / paths::kManifest, manifest.to_json().dump(2) + "\n");
  }
  return manifest;
}

}  // namespace ctscope::pipeline
