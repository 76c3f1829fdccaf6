#include "ctscope/api.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <json.hpp>
#include <regex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "ctscope/embedding.hpp"
#include "ctscope/error.hpp"
#include "ctscope/graphs.hpp"
#include "ctscope/ingest.hpp"
#include "ctscope/pipeline.hpp"
#include "ctscope/sentiment.hpp"
#include "ctscope/util.hpp"

// After Eigen users: <resolv.h> defines _res.
#include <httplib.h>

namespace ctscope::api {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
namespace paths = pipeline::paths;

namespace {

constexpr std::size_t kMaxSearchK = 100;
constexpr std::size_t kDefaultPageLimit = 200;
constexpr std::size_t kMaxPageLimit = 1000;

struct StatusRow {
  std::int64_t timestamp_ms = 0;
  std::string status;
};

struct GraphArtifacts {
  std::string stats;  // stats.json verbatim
  graphs::InteractionGraph graph;
  // Per kind ("wcc", "scc"): persisted profiles, CSV rows keyed by rank, members, curves.
  std::map<std::string, ordered_json> profiles;
  std::map<std::string, std::map<std::size_t, std::string>> csv_rows;
  std::map<std::string, std::map<std::size_t, std::vector<std::size_t>>> members;
  std::map<std::string, std::map<std::size_t, graphs::Curve>> curves;
};

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

graphs::Curve parse_curve_csv(const std::string& text) {
  graphs::Curve c;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = util::split(line, ',');
    c.emplace_back(*util::parse_int(f.at(0)), static_cast<std::size_t>(*util::parse_int(f.at(1))));
  }
  return c;
}

std::size_t parse_size(const Query& q, const std::string& key, std::size_t fallback) {
  auto it = q.find(key);
  if (it == q.end()) return fallback;
  auto v = util::parse_int(it->second);
  if (!v || *v < 0) throw HttpError(400, "parameter '" + key + "' must be a non-negative integer");
  return static_cast<std::size_t>(*v);
}

std::int64_t parse_bin(const Query& q, std::int64_t fallback) {
  auto it = q.find("bin_ms");
  if (it == q.end()) return fallback;
  auto v = util::parse_int(it->second);
  if (!v || *v <= 0) throw HttpError(400, "bin_ms must be a positive integer");
  return *v;
}

ordered_json envelope() {
  ordered_json j;
  j["schema_version"] = pipeline::kSchemaVersion;
  return j;
}

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

struct ApiService::State {
  fs::path dir;
  ordered_json manifest;
  pipeline::PipelineConfig config;
  std::vector<ingest::CleanTweet> tweets;
  std::unordered_map<std::string, std::size_t> tweet_index;
  std::unordered_map<std::string, std::size_t> text_index;  // norm_text -> first tweet
  std::vector<std::pair<std::string, StatusRow>> status;
  std::unordered_map<std::string, std::size_t> status_index;
  std::vector<int> cluster_of;  // parallel to tweets
  std::vector<std::optional<int>> subcluster_of;
  std::vector<sentiment::SentimentLabel> labels;
  std::size_t k = 0;
  std::map<std::string, ordered_json> keywords;  // scope string -> report
  embedding::EmbeddingMatrix embeddings;
  std::unique_ptr<embedding::NnIndex> index;
  std::unique_ptr<embedding::HashedNgramProvider> hasher;
  std::map<std::string, GraphArtifacts> graphs;

  void check_complete() const;
  void load();

  Response route(const std::string& method, const std::string& path, const Query& q, const std::string& body) const;
  ordered_json tweet_json(std::size_t i) const;
  ordered_json get_volume(const Query& q) const;
  ordered_json get_clusters() const;
  ordered_json get_keywords(int cluster, const Query& q) const;
  ordered_json get_timeline(int cluster, const Query& q) const;
  ordered_json post_search(const std::string& body) const;
  ordered_json get_components(const GraphArtifacts& g, const std::string& type, const Query& q) const;
  ordered_json get_component(const GraphArtifacts& g, const std::string& type, std::size_t rank, const Query& q) const;
  ordered_json get_tweet(const std::string& id) const;
};

void ApiService::State::check_complete() const {
  std::vector<std::string> missing;
  if (!fs::exists(dir / paths::kManifest)) {
    throw DependencyError("serve", "incomplete artifacts in " + dir.string() + ": missing manifest.json");
  }
  auto m = json::parse(util::read_file(dir / paths::kManifest));
  for (auto stage : pipeline::all_stages()) {
    std::string name(pipeline::to_string(stage));
    const json* rec = nullptr;
    for (const auto& s : m.at("stages")) {
      if (s.at("name") == name) rec = &s;
    }
    if (!rec) {
      missing.push_back("stage " + name);
      continue;
    }
    for (const auto& [p, _] : rec->at("outputs").items()) {
      if (!fs::exists(dir / p)) missing.push_back(p);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& s : missing) list += (list.empty() ? "" : ", ") + s;
    throw DependencyError("serve", "incomplete artifacts in " + dir.string() + ": missing " + list);
  }
}

void ApiService::State::load() {
  check_complete();
  manifest = ordered_json::parse(util::read_file(dir / paths::kManifest));
  config = pipeline::PipelineConfig::from_json(manifest.at("config"), dir);

  tweets = pipeline::load_clean_tweets(dir);
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    tweet_index.emplace(tweets[i].id, i);
    text_index.emplace(tweets[i].norm_text, i);
  }

  std::istringstream st(util::read_file(dir / paths::kStatus));
  std::string line;
  std::getline(st, line);
  while (std::getline(st, line)) {
    if (line.empty()) continue;
    auto f = util::csv_split(line);
    status_index.emplace(f.at(0), status.size());
    status.push_back({f.at(0), {*util::parse_int(f.at(1)), f.at(2)}});
  }

  cluster_of.assign(tweets.size(), -1);
  subcluster_of.assign(tweets.size(), std::nullopt);
  for (const auto& a : pipeline::load_assignments(dir / paths::kAssignments)) {
    auto it = tweet_index.find(a.tweet_id);
    if (it == tweet_index.end()) continue;
    cluster_of[it->second] = a.cluster;
    subcluster_of[it->second] = a.subcluster;
  }
  k = json::parse(util::read_file(dir / paths::kClusterReport)).at("k").get<std::size_t>();

  labels.assign(tweets.size(), {});
  for (auto& [id, l] : pipeline::load_labels(dir / paths::kLabels)) {
    auto it = tweet_index.find(id);
    if (it != tweet_index.end()) labels[it->second] = l;
  }

  for (const auto* p : {&paths::kKeywordsJson, &paths::kSentimentKeywordsJson}) {
    for (auto& r : ordered_json::parse(util::read_file(dir / *p))) keywords[r.at("scope").get<std::string>()] = r;
  }

  embeddings = embedding::load_matrix(dir / paths::kEmbeddings);
  std::vector<int> tags;
  for (const auto& id : embeddings.ids) {
    auto it = tweet_index.find(id);
    tags.push_back(it == tweet_index.end() ? -1 : cluster_of[it->second]);
  }
  index = std::make_unique<embedding::NnIndex>(embeddings, tags);
  if (config.embedding_provider == "hashed") {
    hasher = std::make_unique<embedding::HashedNgramProvider>(embeddings.dim, config.embedding_seed);
  }

  for (const auto& type : graphs::all_graph_types()) {
    auto gdir = dir / paths::graph_dir(type);
    GraphArtifacts ga;
    ga.stats = util::read_file(gdir / "stats.json");
    ga.graph = graphs::parse_graphml(util::read_file(gdir / "graph.graphml")).graph;
    for (std::string kind : {"wcc", "scc"}) {
      ga.profiles[kind] = ordered_json::parse(util::read_file(gdir / fmt::format("components_{}.json", kind)));
      std::istringstream csv(util::read_file(gdir / fmt::format("components_{}.csv", kind)));
      std::getline(csv, line);
      while (std::getline(csv, line)) {
        if (line.empty()) continue;
        auto f = util::csv_split(line);
        ga.csv_rows[kind][static_cast<std::size_t>(*util::parse_int(f.at(2)))] = line;
      }
      std::istringstream mem(util::read_file(gdir / fmt::format("members_{}.csv", kind)));
      std::getline(mem, line);
      while (std::getline(mem, line)) {
        if (line.empty()) continue;
        auto f = util::csv_split(line);
        auto rank = static_cast<std::size_t>(*util::parse_int(f.at(2)));
        if (!ga.csv_rows[kind].count(rank)) continue;  // only profiled components are served
        auto v = ga.graph.find(f.at(0));
        if (!v) throw DataError("members_" + kind + ".csv names unknown node " + f.at(0));
        ga.members[kind][rank].push_back(*v);
      }
      for (const auto& [rank, _] : ga.csv_rows[kind]) {
        ga.curves[kind][rank] = parse_curve_csv(util::read_file(gdir / "curves" / fmt::format("{}_{}.csv", kind, rank)));
      }
    }
    graphs.emplace(type.str(), std::move(ga));
  }
}

ordered_json ApiService::State::tweet_json(std::size_t i) const {
  const auto& t = tweets[i];
  ordered_json j;
  j["id"] = t.id;
  j["timestamp_ms"] = t.timestamp_ms;
  j["user_id"] = t.user_id;
  j["text"] = t.full_text;
  j["cluster_id"] = cluster_of[i] < 0 ? ordered_json(nullptr) : ordered_json(cluster_of[i]);
  j["sentiment"] = to_string(labels[i].label);
  j["sentiment_score"] = labels[i].signed_score();
  return j;
}

ordered_json ApiService::State::get_volume(const Query& q) const {
  auto bin = parse_bin(q, config.bin_width_ms);
  std::vector<std::int64_t> raw, clean;
  for (const auto& [_, s] : status) {
    raw.push_back(s.timestamp_ms);
    if (s.status == "kept") clean.push_back(s.timestamp_ms);
  }
  auto series = [](const ingest::VolumeSeries& v) {
    auto arr = ordered_json::array();
    for (const auto& [t, n] : v.bins) arr.push_back({{"bin_start_ms", t}, {"count", n}});
    return arr;
  };
  auto j = envelope();
  j["bin_ms"] = bin;
  j["raw"] = series(ingest::volume_histogram(raw, bin));
  j["clean"] = series(ingest::volume_histogram(clean, bin));
  return j;
}

ordered_json ApiService::State::get_clusters() const {
  auto j = envelope();
  auto summary = ordered_json::parse(util::read_file(dir / paths::kClustersSummary));
  j["k"] = k;
  j["total"] = tweets.size();
  j["clusters"] = summary.at("clusters");
  return j;
}

ordered_json ApiService::State::get_keywords(int cluster, const Query& q) const {
  std::string scope = fmt::format("cluster:{}", cluster);
  auto it = q.find("sentiment");
  if (it != q.end() && !it->second.empty()) {
    auto p = parse_polarity(it->second);
    if (!p) throw HttpError(400, "sentiment must be positive, neutral or negative");
    scope += ":" + std::string(to_string(*p));
  }
  auto r = keywords.find(scope);
  if (r == keywords.end()) throw HttpError(404, "no keyword report for " + scope);
  auto j = envelope();
  j["cluster_id"] = cluster;
  j["report"] = r->second;
  return j;
}

ordered_json ApiService::State::get_timeline(int cluster, const Query& q) const {
  auto bin = parse_bin(q, config.bin_width_ms);
  std::vector<std::int64_t> ts;
  for (const auto& t : tweets) ts.push_back(t.timestamp_ms);
  auto all = sentiment::timeline(ts, labels, cluster_of, bin);
  auto j = envelope();
  j["cluster_id"] = cluster;
  j["bin_ms"] = bin;
  auto bins = ordered_json::array();
  for (const auto& tl : all) {
    if (tl.scope != cluster) continue;
    for (const auto& b : tl.bins) {
      bins.push_back({{"bin_start_ms", b.bin_start_ms},
                      {"n", b.n},
                      {"ratio_pos", optional_json(b.ratio_pos)},
                      {"ratio_neu", optional_json(b.ratio_neu)},
                      {"ratio_neg", optional_json(b.ratio_neg)},
                      {"avg", optional_json(b.avg_sentiment)}});
    }
  }
  j["bins"] = std::move(bins);
  return j;
}

ordered_json ApiService::State::post_search(const std::string& body) const {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::parse_error&) {
    throw HttpError(400, "request body must be JSON");
  }
  if (!req.is_object() || !req.contains("query") || !req["query"].is_string()) {
    throw HttpError(400, "'query' (string) is required");
  }
  std::size_t n = 10;
  if (req.contains("k")) {
    if (!req["k"].is_number_integer() || req["k"].get<std::int64_t>() < 1) throw HttpError(400, "'k' must be >= 1");
    n = std::min<std::size_t>(req["k"].get<std::size_t>(), kMaxSearchK);
  }
  std::optional<int> filter;
  if (req.contains("cluster_id") && !req["cluster_id"].is_null()) {
    if (!req["cluster_id"].is_number_integer()) throw HttpError(400, "'cluster_id' must be an integer");
    filter = req["cluster_id"].get<int>();
    if (*filter < 0 || static_cast<std::size_t>(*filter) >= k) throw HttpError(404, "unknown cluster");
  }
  auto norm = ingest::normalize_text(req["query"].get<std::string>());
  if (norm.empty()) throw HttpError(400, "'query' is empty after normalization");

  std::vector<double> qv;
  auto stored = text_index.find(norm);
  std::optional<std::size_t> row;
  if (stored != text_index.end()) row = index->find(tweets[stored->second].id);
  if (row) {
    auto r = index->unit_row(*row);
    qv.assign(r.begin(), r.end());
  } else if (hasher) {
    auto v = hasher->embed_text(norm);
    qv.assign(v.begin(), v.end());
  } else {
    throw HttpError(422, "free-text queries need the hashed embedding provider");
  }
  std::vector<embedding::Neighbor> hits;
  try {
    hits = index->search(qv, n, filter);
  } catch (const DataError& e) {
    throw HttpError(422, e.what());
  }
  auto j = envelope();
  j["query"] = req["query"];
  j["k"] = n;
  j["cluster_id"] = filter ? ordered_json(*filter) : ordered_json(nullptr);
  auto arr = ordered_json::array();
  for (const auto& h : hits) {
    auto t = tweet_json(tweet_index.at(h.id));
    t["similarity"] = h.similarity;
    arr.push_back(std::move(t));
  }
  j["results"] = std::move(arr);
  return j;
}

namespace {

std::string component_kind(const Query& q) {
  auto it = q.find("kind");
  if (it == q.end()) return "wcc";
  if (!graphs::parse_component_kind(it->second)) throw HttpError(400, "kind must be wcc or scc");
  return it->second;
}

}  // namespace

ordered_json ApiService::State::get_components(const GraphArtifacts& g, const std::string& type, const Query& q) const {
  auto kind = component_kind(q);
  const auto& profiles = g.profiles.at(kind);
  auto top = std::min(parse_size(q, "top", profiles.size()), profiles.size());
  auto j = envelope();
  j["graph"] = type;
  j["kind"] = kind;
  j["csv_header"] = util::trim(graphs::profile_csv_header());
  auto arr = ordered_json::array();
  auto rows = ordered_json::array();
  for (std::size_t i = 0; i < top; ++i) {
    arr.push_back(profiles[i]);
    rows.push_back(g.csv_rows.at(kind).at(profiles[i].at("rank").get<std::size_t>()));
  }
  j["profiles"] = std::move(arr);
  j["csv_rows"] = std::move(rows);
  return j;
}

ordered_json ApiService::State::get_component(const GraphArtifacts& g, const std::string& type, std::size_t rank,
                                              const Query& q) const {
  auto kind = component_kind(q);
  auto mit = g.members.at(kind).find(rank);
  if (mit == g.members.at(kind).end()) throw HttpError(404, fmt::format("no profiled {} component of rank {}", kind, rank));
  const auto& nodes = mit->second;
  auto offset = parse_size(q, "offset", 0);
  auto limit = std::min(parse_size(q, "limit", kDefaultPageLimit), kMaxPageLimit);

  auto j = envelope();
  j["graph"] = type;
  j["kind"] = kind;
  j["rank"] = rank;
  for (const auto& p : g.profiles.at(kind)) {
    if (p.at("rank").get<std::size_t>() == rank) j["profile"] = p;
  }
  j["csv_row"] = g.csv_rows.at(kind).at(rank);
  auto curve = ordered_json::array();
  for (const auto& [t, c] : g.curves.at(kind).at(rank)) curve.push_back({t, c});
  j["temporal_curve"] = std::move(curve);

  std::vector<bool> member(g.graph.node_count(), false);
  for (auto v : nodes) member[v] = true;
  std::vector<std::size_t> edges;
  for (std::size_t e = 0; e < g.graph.edge_count(); ++e) {
    if (member[g.graph.edges()[e].src] && member[g.graph.edges()[e].dst]) edges.push_back(e);
  }
  auto page = [&](std::size_t total) {
    return ordered_json{{"offset", offset}, {"limit", limit}, {"total", total}};
  };
  auto node_arr = ordered_json::array();
  for (std::size_t i = offset; i < std::min(nodes.size(), offset + limit); ++i) {
    const auto& n = g.graph.nodes()[nodes[i]];
    ordered_json nj;
    nj["id"] = n.id;
    nj["sentiment"] = n.sentiment ? ordered_json(std::string(to_string(*n.sentiment))) : ordered_json(nullptr);
    nj["sentiment_score"] = optional_json(n.sentiment_score);
    nj["interaction_count"] = n.interaction_count;
    nj["friends"] = n.friends ? ordered_json(*n.friends) : ordered_json(nullptr);
    nj["followers"] = n.followers ? ordered_json(*n.followers) : ordered_json(nullptr);
    nj["external"] = n.external;
    node_arr.push_back(std::move(nj));
  }
  auto edge_arr = ordered_json::array();
  for (std::size_t i = offset; i < std::min(edges.size(), offset + limit); ++i) {
    const auto& e = g.graph.edges()[edges[i]];
    edge_arr.push_back({{"source", g.graph.nodes()[e.src].id},
                        {"target", g.graph.nodes()[e.dst].id},
                        {"timestamp_ms", e.timestamp_ms},
                        {"tweet_id", e.tweet_id}});
  }
  j["nodes"] = {{"page", page(nodes.size())}, {"items", std::move(node_arr)}};
  j["edges"] = {{"page", page(edges.size())}, {"items", std::move(edge_arr)}};
  return j;
}

ordered_json ApiService::State::get_tweet(const std::string& id) const {
  auto it = tweet_index.find(id);
  if (it != tweet_index.end()) {
    auto j = envelope();
    auto t = tweet_json(it->second);
    t["status"] = "kept";
    t["subcluster_id"] =
        subcluster_of[it->second] ? ordered_json(*subcluster_of[it->second]) : ordered_json(nullptr);
    j["tweet"] = std::move(t);
    return j;
  }
  auto st = status_index.find(id);
  if (st == status_index.end()) throw HttpError(404, "unknown tweet " + id);
  auto j = envelope();
  const auto& row = status[st->second].second;
  j["tweet"] = {{"id", id}, {"timestamp_ms", row.timestamp_ms}, {"status", row.status}};
  return j;
}

Response ApiService::State::route(const std::string& method, const std::string& path, const Query& q,
                                  const std::string& body) const {
  static const std::regex kKeywords(R"(/api/clusters/(-?\d+)/keywords)");
  static const std::regex kTimeline(R"(/api/clusters/(-?\d+)/timeline)");
  static const std::regex kGraphStats(R"(/api/graphs/([a-z-]+)/stats)");
  static const std::regex kGraphComponents(R"(/api/graphs/([a-z-]+)/components)");
  static const std::regex kGraphComponent(R"(/api/graphs/([a-z-]+)/components/(\d+))");
  static const std::regex kTweet(R"(/api/tweets/([^/]+))");

  auto ok = [](const ordered_json& j) { return Response{200, j.dump(2)}; };
  auto need = [&](const char* m) {
    if (method != m) throw HttpError(405, "method not allowed");
  };
  auto cluster_id = [&](const std::string& s) {
    auto v = util::parse_int(s);
    if (!v || *v < 0 || static_cast<std::size_t>(*v) >= k) throw HttpError(404, "unknown cluster " + s);
    return static_cast<int>(*v);
  };
  auto graph = [&](const std::string& s) -> const GraphArtifacts& {
    auto it = graphs.find(s);
    if (it == graphs.end()) throw HttpError(404, "unknown graph type " + s);
    return it->second;
  };

  std::smatch m;
  if (path == "/api/manifest") {
    need("GET");
    return {200, manifest.dump(2)};
  }
  if (path == "/api/volume") {
    need("GET");
    return ok(get_volume(q));
  }
  if (path == "/api/clusters") {
    need("GET");
    return ok(get_clusters());
  }
  if (path == "/api/search") {
    need("POST");
    return ok(post_search(body));
  }
  if (std::regex_match(path, m, kKeywords)) {
    need("GET");
    return ok(get_keywords(cluster_id(m[1]), q));
  }
  if (std::regex_match(path, m, kTimeline)) {
    need("GET");
    return ok(get_timeline(cluster_id(m[1]), q));
  }
  if (std::regex_match(path, m, kGraphStats)) {
    need("GET");
    const auto& g = graph(m[1]);
    auto j = envelope();
    j["graph"] = m[1].str();
    j["stats"] = ordered_json::parse(g.stats);
    return ok(j);
  }
  if (std::regex_match(path, m, kGraphComponents)) {
    need("GET");
    return ok(get_components(graph(m[1]), m[1], q));
  }
  if (std::regex_match(path, m, kGraphComponent)) {
    need("GET");
    return ok(get_component(graph(m[1]), m[1], static_cast<std::size_t>(std::stoull(m[2])), q));
  }
  if (std::regex_match(path, m, kTweet)) {
    need("GET");
    return ok(get_tweet(m[1]));
  }
  throw HttpError(404, "no such endpoint " + path);
}

ApiService::ApiService(const fs::path& artifact_dir) : state_(std::make_unique<State>()) {
  state_->dir = artifact_dir;
  state_->load();
}

ApiService::~ApiService() = default;

Response ApiService::handle(const std::string& method, const std::string& path, const Query& query,
                            const std::string& body) const {
  try {
    return state_->route(method, path, query, body);
  } catch (const HttpError& e) {
    auto j = envelope();
    j["error"] = e.what();
    return {e.status(), j.dump(2)};
  } catch (const std::exception& e) {
    auto j = envelope();
    j["error"] = e.what();
    return {500, j.dump(2)};
  }
}

struct Server::Impl {
  ApiService service;
  httplib::Server http;
  std::thread worker;

  explicit Impl(const fs::path& dir) : service(dir) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      Query q;
      for (const auto& [key, value] : req.params) q.emplace(key, value);
      auto r = service.handle(req.method, req.path, q, req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    http.Get(R"(/api/.*)", handler);
    http.Post(R"(/api/.*)", handler);
    http.Put(R"(/api/.*)", handler);
    http.Delete(R"(/api/.*)", handler);
    http.Patch(R"(/api/.*)", handler);
  }
};

Server::Server(const fs::path& artifact_dir) : impl_(std::make_unique<Impl>(artifact_dir)) {}

Server::~Server() { stop(); }

int Server::start(const std::string& host, int port) {
  int bound = port == 0 ? impl_->http.bind_to_any_port(host) : (impl_->http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw IoError(fmt::format("cannot bind {}:{}", host, port));
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return bound;
}

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

void Server::listen(const std::string& host, int port) {
  if (!impl_->http.listen(host, port)) throw IoError(fmt::format("cannot bind {}:{}", host, port));
}

void serve(const fs::path& artifact_dir, const std::string& bind) {
  auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--bind must be host:port");
  auto port = util::parse_int(bind.substr(colon + 1));
  if (!port || *port < 1 || *port > 65535) throw ConfigError("--bind port must be in [1, 65535]");
  Server server(artifact_dir);
  server.listen(bind.substr(0, colon), static_cast<int>(*port));
}

}  // namespace ctscope::api
