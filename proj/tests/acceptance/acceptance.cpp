// Acceptance suite: one PASS/FAIL line per criterion, run against the bundled
// fixture generator. Exit status is the number of failed criteria.

#include <fmt/core.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ctscope/clustering.hpp"
#include "ctscope/embedding.hpp"
#include "ctscope/error.hpp"
#include "ctscope/fixture.hpp"
#include "ctscope/graphs.hpp"
#include "ctscope/ingest.hpp"
#include "ctscope/kernels.hpp"
#include "ctscope/pipeline.hpp"
#include "ctscope/sentiment.hpp"
#include "ctscope/text.hpp"
#include "ctscope/topics.hpp"
#include "ctscope/util.hpp"
#include "unit/oracles.hpp"

// After the Eigen users: <resolv.h> defines _res.
#include "ctscope/api.hpp"
#include <httplib.h>

namespace fs = std::filesystem;
using namespace ctscope;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  double extra_seconds = 0.0;  // work done outside the timed lambda that counts toward the budget

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.notes.push_back(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count() + o.extra_seconds;
  if (budget_s > 0 && secs >= budget_s) o.require(false, fmt::format("runtime {:.2f} s exceeds {:.0f} s", secs, budget_s));
  std::string detail;
  for (std::size_t i = 0; i < o.notes.size() && i < 5; ++i) detail += (i ? "; " : "") + o.notes[i];
  if (o.notes.size() > 5) detail += fmt::format("; ... {} more", o.notes.size() - 5);
  fmt::print("{} {} ({:.2f} s){}{}\n", o.pass ? "PASS" : "FAIL", name, secs, detail.empty() ? "" : " :: ", detail);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::vector<std::string> csv_rows(const fs::path& p) {
  std::vector<std::string> rows;
  std::istringstream in(util::read_file(p));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(line);
  return rows;
}

struct Run {
  fs::path root;
  fs::path out;
  pipeline::RunManifest manifest;
  double seconds = 0.0;
};

Run run_fixture(const fixture::Fixture& fx, const fs::path& root) {
  fs::remove_all(root);
  fixture::write_fixture(fx, root);
  auto cfg = pipeline::PipelineConfig::load(root / "config.json");
  Run r;
  r.root = root;
  r.out = cfg.output_dir;
  auto t0 = Clock::now();
  r.manifest = pipeline::run_pipeline(cfg, pipeline::all_stages());
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

double stage_seconds(const Run& r, const std::string& name) {
  const auto* s = r.manifest.stage(name);
  return s ? s->duration_ms / 1000.0 : 0.0;
}

std::string random_string(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{
      "a", "Z", "9", " ", "  ", "\t", "\n", "@", "@user", "@bob_1", "http://x.co/a", "https://t.co/Ab1",
      "www.site.org", "#tag", "ü", "é", "\xe2\x80\x94", "😀", "&amp;", "RT ", ".", ",", "!", "me@home", "http", "://",
      "www", "_", "\r\n", "\xc2\xa0"};
  std::string s;
  auto n = rng() % 25;
  for (std::size_t i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  return s;
}

embedding::EmbeddingMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  embedding::EmbeddingMatrix m;
  m.dim = d;
  std::vector<double> scale(d);
  for (auto& s : scale) s = 0.1 + 3.0 * clustering::uniform01(rng);
  for (std::size_t i = 0; i < n; ++i) {
    m.ids.push_back("r" + std::to_string(i));
    for (std::size_t j = 0; j < d; ++j) m.values.push_back(static_cast<float>(g(rng) * scale[j]));
  }
  return m;
}

// Mirrors the unit-test profile graph: a 10-node reply ring feeding a 20-node chain.
void hand_built_profile(Outcome& o) {
  using namespace graphs;
  std::vector<NodeAttrs> nodes(30);
  std::vector<EdgeSpec> edges;
  auto id = [](std::size_t i) { return fmt::format("h{:02}", i); };
  for (std::size_t i = 0; i < 30; ++i) {
    nodes[i].id = id(i);
    if (i < 10) {
      nodes[i].friends = static_cast<std::int64_t>(3 * i);
      nodes[i].followers = i % 2 ? 2 : 1;
    } else if (i < 29) {
      nodes[i].friends = static_cast<std::int64_t>(90 + i);
      nodes[i].followers = i < 20 ? 2 : 3;
    }
  }
  for (std::size_t i = 0; i < 10; ++i) edges.push_back({id(i), id((i + 1) % 10), static_cast<std::int64_t>(i) * 1000, "r"});
  for (std::size_t i = 9; i < 29; ++i) edges.push_back({id(i), id(i + 1), 50000 + static_cast<std::int64_t>(i), "c"});
  InteractionGraph g({NodeKind::kUser, EdgeKind::kReply}, nodes, edges);
  auto scc = strongly_connected_components(g);
  auto p = profile_component(g, scc.at(0));
  // Hand computation: ring friends 0,3,..,27 (mean 13.5 -> 14, lower median 12), followers 1,2 alternating
  // (mean 1.5 -> 2, median 1); reachable friends 100..118 (mean 109, median 109), followers ten 2s and
  // nine 3s (mean 2.47 -> 2, median 2), one node without metadata.
  o.require(p.within.count == 10 && p.within.missing == 0, "within count");
  o.require(p.within.mean_friends == 14 && p.within.median_friends == 12, "within friends");
  o.require(p.within.mean_followers == 2 && p.within.median_followers == 1, "within followers");
  o.require(p.reachable_set_size == 20 && p.reachable.count == 19 && p.reachable.missing == 1, "reachable count");
  o.require(p.reachable.mean_friends == 109 && p.reachable.median_friends == 109, "reachable friends");
  o.require(p.reachable.mean_followers == 2 && p.reachable.median_followers == 2, "reachable followers");
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / "ctscope_acceptance";
  fs::create_directories(root);
  const auto fx = fixture::make_fixture();
  const auto& truth = fx.truth;

  Run a, b;
  bool runs_ok = true;
  try {
    a = run_fixture(fx, root / "a");
    b = run_fixture(fx, root / "b");
  } catch (const std::exception& e) {
    fmt::print("pipeline run failed: {}\n", e.what());
    runs_ok = false;
  }

  criterion("Sanitization: exactly 800 template copies removed; normalization idempotent over 10k strings", 5.0,
            [&](Outcome& o) {
              std::string joined;
              for (const auto& l : fx.lines) joined += l + "\n";
              std::istringstream in(joined);
              auto loaded = ingest::load_tweets(in, false);
              auto kept = ingest::filter_by_keywords(loaded.tweets, ingest::KeywordList(fx.keywords));
              auto spam = ingest::filter_spam(ingest::clean_all(kept), ingest::SpamTemplateList(fx.spam_templates));
              o.require(spam.removed.size() == 800, fmt::format("removed {}", spam.removed.size()));
              std::set<std::string> planted(truth.spam_ids.begin(), truth.spam_ids.end());
              for (const auto& t : spam.removed) o.require(planted.count(t.id) == 1, "removed non-planted " + t.id);
              if (runs_ok) o.require(a.manifest.counts.spam_removed == 800, "pipeline spam_removed");
              std::mt19937_64 rng(99);
              std::size_t bad = 0;
              for (int i = 0; i < 10000; ++i) {
                auto s = random_string(rng);
                auto once = ingest::normalize_text(s);
                if (ingest::normalize_text(once) != once) ++bad;
              }
              o.require(bad == 0, fmt::format("{} non-idempotent strings", bad));
            });

  criterion("Reducer: train_mse matches eigen oracle on 50 matrices; monotone in latent_dim on 5", 30.0,
            [&](Outcome& o) {
              std::mt19937_64 rng(2023);
              double worst = 0.0;
              for (int t = 0; t < 50; ++t) {
                std::size_t d = 2 + rng() % 63, n = d + 1 + rng() % (500 - d);
                auto m = random_matrix(rng, n, d);
                std::size_t k = 1 + rng() % d;
                auto model = embedding::fit_reducer(m, k);
                auto ev = oracle::jacobi_eigenvalues(oracle::covariance(m.to_double(), n, d), d);
                double expect = 0.0, trace = 0.0;
                for (std::size_t i = 0; i < d; ++i) trace += ev[i];
                for (std::size_t i = k; i < d; ++i) expect += ev[i];
                expect /= static_cast<double>(d);
                double err = std::abs(model.train_mse - expect);
                // Relative bound with an absolute floor scaled to total variance (k = d gives expect 0).
                double tol = 1e-6 * expect + 1e-12 * trace;
                worst = std::max(worst, err / std::max(expect, 1e-300));
                o.require(err <= tol, fmt::format("matrix {} ({}x{}, k={}): mse {} vs {}", t, n, d, k, model.train_mse, expect));
              }
              for (int t = 0; t < 5; ++t) {
                std::size_t n = 200 + rng() % 301;
                auto m = random_matrix(rng, n, 64);
                double prev = INFINITY;
                for (std::size_t k = 1; k <= 64; ++k) {
                  double mse = embedding::fit_reducer(m, k).train_mse;
                  o.require(mse <= prev, fmt::format("matrix {}: mse rose at k={}", t, k));
                  prev = mse;
                }
              }
            });

  criterion("Clustering: purity >= 0.95 at k=6; inertia traces monotone; assignments optimal", 20.0, [&](Outcome& o) {
    o.require(runs_ok, "pipeline run failed");
    if (!runs_ok) return;
    o.extra_seconds = stage_seconds(a, "cluster");
    auto asg = pipeline::load_assignments(a.out / pipeline::paths::kAssignments);
    std::map<int, std::map<int, std::size_t>> table;
    std::size_t total = 0;
    for (const auto& r : asg) {
      auto it = truth.topic.find(r.tweet_id);
      if (it == truth.topic.end()) continue;
      ++table[r.cluster][it->second];
      ++total;
    }
    std::size_t agree = 0;
    for (const auto& [c, row] : table) {
      std::size_t best = 0;
      for (const auto& [g, n] : row) best = std::max(best, n);
      agree += best;
    }
    double purity = total ? static_cast<double>(agree) / static_cast<double>(total) : 0.0;
    o.require(total > 0 && purity >= 0.95, fmt::format("purity {:.4f} over {}", purity, total));
    o.notes.push_back(fmt::format("purity {:.5f}", purity));

    auto report = json::parse(util::read_file(a.out / pipeline::paths::kClusterReport));
    auto trace = report.at("inertia_trace").get<std::vector<double>>();
    for (std::size_t i = 1; i < trace.size(); ++i) o.require(trace[i] <= trace[i - 1], "pipeline trace rose");

    auto latent = embedding::load_matrix(a.out / pipeline::paths::kLatent);
    auto model = clustering::cluster_model_from_bytes(util::read_file(a.out / pipeline::paths::kClusterModel));
    std::map<std::string, int> by_id;
    for (const auto& r : asg) by_id[r.tweet_id] = r.cluster;
    auto x = latent.to_double();
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < latent.rows(); ++i) {
      std::span<const double> v(x.data() + i * latent.dim, latent.dim);
      int c = by_id.at(latent.ids[i]);
      double own = kernels::squared_distance(v, model.centroid(static_cast<std::size_t>(c)));
      for (std::size_t j = 0; j < model.k; ++j) {
        double d = kernels::squared_distance(v, model.centroid(j));
        if (d < own || (d == own && static_cast<int>(j) < c)) ++wrong;
      }
    }
    o.require(wrong == 0, fmt::format("{} suboptimal assignments", wrong));

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto fit = clustering::kmeans_fit(latent, {.k = 6, .seed = seed});
      for (std::size_t i = 1; i < fit.inertia_trace.size(); ++i)
        o.require(fit.inertia_trace[i] <= fit.inertia_trace[i - 1], fmt::format("seed {} trace rose", seed));
    }
  });

  criterion("Topic reports: 20-doc oracle, exclusion soundness, planted markers in their own cluster", 0.0,
            [&](Outcome& o) {
              std::vector<std::vector<std::string>> docs{
                  {"bitcoin", "price", "bitcoin"}, {"ftx", "collapse", "ftx", "ftx"}, {"nft", "art", "mint"},
                  {"defi", "yield", "farm"},       {"bitcoin", "halving"},             {"price", "crash", "panic"},
                  {"nft", "mint", "mint", "drop"}, {"airdrop", "claim", "free"},        {"mining", "hashrate"},
                  {"ftx", "sbf", "fraud"},         {"defi", "hack", "exploit"},         {"price", "pump"},
                  {"airdrop", "airdrop", "scam"},  {"mining", "rig", "power"},          {"art", "collector"},
                  {"yield", "stable"},             {"bitcoin", "ftx", "nft"},           {"claim", "wallet"},
                  {"hashrate", "difficulty"},      {"sbf", "arrest"}};
              auto model = topics::fit_tfidf(docs);
              auto w = oracle::tfidf(docs, model.terms);
              for (std::size_t d = 0; d < docs.size(); ++d)
                for (std::size_t t = 0; t < model.terms.size(); ++t)
                  o.require(std::abs(model.weight(d, model.terms[t]) - w[d][t]) <= 1e-9,
                            fmt::format("weight doc {} term {}", d, model.terms[t]));
              std::vector<std::size_t> subset{0, 1, 4, 5, 9, 11, 16, 19};
              std::vector<std::pair<double, std::string>> expect;
              for (std::size_t t = 0; t < model.terms.size(); ++t) {
                double s = 0;
                for (auto d : subset) s += w[d][t];
                if (s > 0) expect.emplace_back(-s, model.terms[t]);
              }
              std::sort(expect.begin(), expect.end(), [](const auto& l, const auto& r) {
                if (std::abs(l.first - r.first) > 1e-12) return l.first < r.first;
                return l.second < r.second;
              });
              auto got = topics::top_terms(model, subset, 10);
              o.require(got.size() == std::min<std::size_t>(10, expect.size()), "top_terms size");
              for (std::size_t i = 0; i < got.size(); ++i)
                o.require(got[i].term == expect[i].second, fmt::format("rank {}: {} vs {}", i + 1, got[i].term, expect[i].second));

              o.require(runs_ok, "pipeline run failed");
              if (!runs_ok) return;
              auto check_disjoint = [&](const std::vector<topics::KeywordReport>& reports, const std::string& what) {
                std::set<std::string> top;
                for (const auto& r : reports) {
                  if (r.scope.cluster < 0) {
                    top.clear();
                    for (std::size_t i = 0; i < r.ranked_terms.size() && i < topics::kExcludeTop; ++i) top.insert(r.ranked_terms[i].term);
                    continue;
                  }
                  for (const auto& t : r.ranked_terms)
                    o.require(top.count(t.term) == 0, what + ": " + r.scope.str() + " contains " + t.term);
                }
              };
              auto kw = topics::reports_from_json(util::read_file(a.out / pipeline::paths::kKeywordsJson));
              check_disjoint(kw, "keywords");
              auto skw = topics::reports_from_json(util::read_file(a.out / pipeline::paths::kSentimentKeywordsJson));
              check_disjoint(skw, "sentiment keywords");

              // Map planted groups to clusters by majority, then check marker placement.
              auto asg = pipeline::load_assignments(a.out / pipeline::paths::kAssignments);
              std::map<int, std::map<int, std::size_t>> votes;
              for (const auto& r : asg) {
                auto it = truth.topic.find(r.tweet_id);
                if (it != truth.topic.end()) ++votes[it->second][r.cluster];
              }
              for (std::size_t g = 0; g < truth.markers.size(); ++g) {
                int cluster = -1;
                std::size_t best = 0;
                for (const auto& [c, n] : votes[static_cast<int>(g)])
                  if (n > best) best = n, cluster = c;
                for (const auto& r : kw) {
                  if (r.scope.cluster < 0) continue;
                  bool has = std::any_of(r.ranked_terms.begin(), r.ranked_terms.end(),
                                         [&](const auto& t) { return t.term == truth.markers[g]; });
                  o.require(has == (r.scope.cluster == cluster),
                            fmt::format("marker '{}' {} cluster {} top-10", truth.markers[g], has ? "in" : "missing from", r.scope.cluster));
                }
              }
            });

  criterion("Sentiment timelines: planted per-bin counts exact; ratios sum to 1; avg in [-1,1]", 0.0, [&](Outcome& o) {
    o.require(runs_ok, "pipeline run failed");
    if (!runs_ok) return;
    const std::int64_t bin = ingest::kTwelveHoursMs;
    std::map<std::int64_t, std::array<std::size_t, 3>> planted;
    for (const auto& t : pipeline::load_clean_tweets(a.out)) {
      auto it = truth.sentiment.find(t.id);
      if (it == truth.sentiment.end()) {
        o.require(false, "no planted label for " + t.id);
        continue;
      }
      std::int64_t start = t.timestamp_ms - ((t.timestamp_ms % bin) + bin) % bin;
      ++planted[start][static_cast<std::size_t>(it->second)];
    }
    auto parse_csv = [&](const fs::path& p, bool compare) {
      for (const auto& row : csv_rows(p)) {
        auto f = util::csv_split(row);
        auto start = std::stoll(f.at(0));
        auto n = std::stoull(f.at(1));
        if (n == 0) {
          o.require(f.at(2).empty() && f.at(5).empty(), "empty bin carries values");
          continue;
        }
        double rp = std::stod(f.at(2)), rn = std::stod(f.at(3)), rg = std::stod(f.at(4)), avg = std::stod(f.at(5));
        o.require(std::abs(rp + rn + rg - 1.0) <= 1e-9, fmt::format("{} bin {} ratios sum {}", p.filename().string(), start, rp + rn + rg));
        o.require(avg >= -1.0 && avg <= 1.0, "avg out of range");
        if (!compare) continue;
        auto counts = planted[start];
        std::array<std::size_t, 3> got{static_cast<std::size_t>(std::llround(rp * static_cast<double>(n))),
                                       static_cast<std::size_t>(std::llround(rn * static_cast<double>(n))),
                                       static_cast<std::size_t>(std::llround(rg * static_cast<double>(n)))};
        o.require(got == counts, fmt::format("bin {}: got {}/{}/{} planted {}/{}/{}", start, got[0], got[1], got[2],
                                             counts[0], counts[1], counts[2]));
        planted.erase(start);
      }
    };
    parse_csv(a.out / pipeline::paths::kTimelineOverall, true);
    o.require(planted.empty(), "planted bins missing from the timeline");
    for (int c = 0; c < 6; ++c) parse_csv(a.out / pipeline::paths::timeline_cluster(c), false);
  });

  criterion("Graph algorithms: 200 random digraphs vs closure oracle; condensation acyclic; degree sums", 30.0,
            [&](Outcome& o) {
              using namespace graphs;
              std::mt19937_64 rng(31337);
              for (int trial = 0; trial < 200; ++trial) {
                std::size_t n = 1 + rng() % 40;
                double density = clustering::uniform01(rng) * 0.3;
                oracle::Adjacency adj(n);
                std::vector<NodeAttrs> nodes(n);
                std::vector<EdgeSpec> edges;
                for (std::size_t i = 0; i < n; ++i) nodes[i].id = fmt::format("n{:02}", i);
                for (std::size_t i = 0; i < n; ++i)
                  for (std::size_t j = 0; j < n; ++j)
                    if (clustering::uniform01(rng) < density) {
                      adj[i].push_back(j);
                      edges.push_back({nodes[i].id, nodes[j].id, static_cast<std::int64_t>(edges.size()), "e"});
                    }
                InteractionGraph g({NodeKind::kUser, EdgeKind::kReply}, nodes, edges);
                auto lists = [](const std::vector<Component>& cs) {
                  std::vector<std::vector<std::size_t>> out;
                  for (const auto& c : cs) out.push_back(c.nodes);
                  std::sort(out.begin(), out.end());
                  return out;
                };
                auto scc = strongly_connected_components(g);
                auto wcc = weakly_connected_components(g);
                auto want_scc = oracle::scc_by_closure(adj), want_wcc = oracle::wcc_by_closure(adj);
                std::sort(want_scc.begin(), want_scc.end());
                std::sort(want_wcc.begin(), want_wcc.end());
                o.require(lists(scc) == want_scc, fmt::format("graph {} SCC mismatch", trial));
                o.require(lists(wcc) == want_wcc, fmt::format("graph {} WCC mismatch", trial));
                std::vector<std::size_t> comp(n);
                for (std::size_t c = 0; c < scc.size(); ++c)
                  for (auto v : scc[c].nodes) comp[v] = c;
                oracle::Adjacency dag(scc.size());
                for (const auto& e : g.edges())
                  if (comp[e.src] != comp[e.dst]) dag[comp[e.src]].push_back(comp[e.dst]);
                o.require(oracle::scc_by_closure(dag).size() == scc.size(), fmt::format("graph {} condensation cyclic", trial));
                std::size_t sin = 0, sout = 0;
                for (std::size_t v = 0; v < n; ++v) sin += g.in(v).size(), sout += g.out(v).size();
                o.require(sin == g.edge_count() && sout == g.edge_count(), "degree sums");
              }
              o.require(runs_ok, "pipeline run failed");
              if (!runs_ok) return;
              for (const auto& type : all_graph_types()) {
                auto parsed = parse_graphml(util::read_file(a.out / pipeline::paths::graph_dir(type) / "graph.graphml"));
                const auto& g = parsed.graph;
                std::size_t sin = 0, sout = 0;
                for (std::size_t v = 0; v < g.node_count(); ++v) sin += g.in(v).size(), sout += g.out(v).size();
                o.require(sin == g.edge_count() && sout == g.edge_count(), type.str() + " degree sums");
                auto stats = json::parse(util::read_file(a.out / pipeline::paths::graph_dir(type) / "stats.json"));
                o.require(stats.at("n_edges") == g.edge_count(), type.str() + " stats edge count");
                double mean_in = stats.at("in_degree").at("mean"), mean_out = stats.at("out_degree").at("mean");
                o.require(std::abs(mean_in * static_cast<double>(g.node_count()) - static_cast<double>(g.edge_count())) < 1e-6 &&
                              std::abs(mean_out - mean_in) < 1e-12,
                          type.str() + " mean degrees");
              }
            });

  criterion("Bot signatures: linear ring >= 0.98 + linear_growth; organic >= 0.05 lower; zero_metadata; hand-built stats",
            0.0, [&](Outcome& o) {
              hand_built_profile(o);
              o.require(runs_ok, "pipeline run failed");
              if (!runs_ok) return;
              auto dir = a.out / pipeline::paths::graph_dir(*graphs::GraphType::parse("user-reply"));
              std::map<std::string, std::size_t> rank_of;
              for (const auto& row : csv_rows(dir / "members_scc.csv")) {
                auto f = util::csv_split(row);
                rank_of[f.at(0)] = std::stoull(f.at(2));
              }
              auto profiles = json::parse(util::read_file(dir / "components_scc.json"));
              auto locate = [&](const std::vector<std::string>& users, const std::string& what) -> const json* {
                std::set<std::size_t> ranks;
                for (const auto& u : users)
                  if (rank_of.count(u)) ranks.insert(rank_of[u]);
                if (ranks.size() != 1) {
                  o.require(false, fmt::format("{} spans {} components", what, ranks.size()));
                  return nullptr;
                }
                for (const auto& p : profiles)
                  if (p.at("rank") == *ranks.begin()) {
                    o.require(p.at("size") == users.size(), what + " component size");
                    return &p;
                  }
                o.require(false, what + " component not profiled");
                return nullptr;
              };
              auto flags = [](const json& p) { return p.at("bot_flags").get<std::set<std::string>>(); };
              const json* ring = locate(truth.bot_ring_users, "bot ring");
              const json* organic = locate(truth.organic_users, "organic thread");
              const json* zero = locate(truth.zero_meta_users, "zero-metadata ring");
              if (ring) {
                double s = ring->at("linearity_score").is_null() ? 0.0 : ring->at("linearity_score").get<double>();
                o.require(s >= 0.98, fmt::format("ring linearity {:.4f}", s));
                o.require(flags(*ring).count("linear_growth") == 1, "ring lacks linear_growth");
                if (organic) {
                  double so = organic->at("linearity_score").is_null() ? 0.0 : organic->at("linearity_score").get<double>();
                  o.require(so <= s - 0.05, fmt::format("organic {:.4f} vs ring {:.4f}", so, s));
                  o.require(flags(*organic).count("linear_growth") == 0, "organic flagged linear_growth");
                }
              }
              if (zero) o.require(flags(*zero).count("zero_metadata") == 1, "zero-metadata ring not flagged");
            });

  criterion("Reply-tree shape: tweet-reply largest WCC has 188 nodes and 187 edges", 0.0, [&](Outcome& o) {
    o.require(runs_ok, "pipeline run failed");
    if (!runs_ok) return;
    auto dir = a.out / pipeline::paths::graph_dir(*graphs::GraphType::parse("tweet-reply"));
    auto g = graphs::parse_graphml(util::read_file(dir / "largest_wcc.graphml")).graph;
    o.require(g.node_count() == 188 && g.edge_count() == 187,
              fmt::format("largest WCC |V|={} |E|={}", g.node_count(), g.edge_count()));
    std::set<std::string> ids;
    for (const auto& n : g.nodes()) ids.insert(n.id);
    o.require(ids == std::set<std::string>(truth.tree_tweets.begin(), truth.tree_tweets.end()), "membership differs from planted tree");
    auto profiles = json::parse(util::read_file(dir / "components_wcc.json"));
    o.require(!profiles.empty() && profiles[0].at("size") == 188, "rank-1 WCC profile size");
  });

  criterion("Determinism: two full runs give identical artifacts; each run < 120 s", 0.0, [&](Outcome& o) {
    o.require(runs_ok, "pipeline run failed");
    if (!runs_ok) return;
    o.notes.push_back(fmt::format("runs {:.1f} s / {:.1f} s", a.seconds, b.seconds));
    o.require(a.seconds < 120.0 && b.seconds < 120.0, "runtime budget");
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(a.out))
      if (e.is_regular_file()) files.push_back(fs::relative(e.path(), a.out));
    std::sort(files.begin(), files.end());
    std::size_t compared = 0;
    for (const auto& rel : files) {
      if (rel == pipeline::paths::kManifest) continue;
      if (!fs::exists(b.out / rel)) {
        o.require(false, "missing in second run: " + rel.string());
        continue;
      }
      o.require(util::read_file(a.out / rel) == util::read_file(b.out / rel), "differs: " + rel.string());
      ++compared;
    }
    std::size_t count_b = 0;
    for (const auto& e : fs::recursive_directory_iterator(b.out)) count_b += e.is_regular_file();
    o.require(count_b == files.size(), "file sets differ");
    // The manifest holds timings and absolute paths; its recorded digests must agree.
    for (const auto& st : a.manifest.stages) {
      const auto* other = b.manifest.stage(st.name);
      o.require(other && other->outputs == st.outputs, "manifest digests differ for " + st.name);
    }
    o.notes.push_back(fmt::format("{} files compared", compared));
    if (o.pass) o.notes.erase(o.notes.begin() + 1);
  });

  criterion("API conformance: every endpoint over HTTP; search self-match; component payloads match reports", 0.0,
            [&](Outcome& o) {
              o.require(runs_ok, "pipeline run failed");
              if (!runs_ok) return;
              api::Server server(a.out);
              int port = server.start("127.0.0.1", 0);
              httplib::Client cli("127.0.0.1", port);
              cli.set_read_timeout(30);
              auto get = [&](const std::string& path, int want = 200) -> json {
                auto r = cli.Get(path);
                if (!r) {
                  o.require(false, "no response for " + path);
                  return json();
                }
                o.require(r->status == want, fmt::format("GET {} -> {}", path, r->status));
                o.require(r->get_header_value("Content-Type").find("application/json") == 0, "content type for " + path);
                return json::parse(r->body, nullptr, false);
              };
              auto manifest = get("/api/manifest");
              o.require(manifest.is_object() && manifest.at("counts").at("final") == a.manifest.counts.final_count, "manifest counts");
              auto vol = get("/api/volume?bin_ms=3600000");
              std::size_t clean = 0;
              for (const auto& bnode : vol.at("clean")) clean += bnode.at("count").get<std::size_t>();
              o.require(clean == a.manifest.counts.final_count, "volume total");
              auto clusters = get("/api/clusters");
              o.require(clusters.at("k") == 6, "cluster count");
              for (int c = 0; c < 6; ++c) {
                get(fmt::format("/api/clusters/{}/keywords", c));
                get(fmt::format("/api/clusters/{}/keywords?sentiment=negative", c));
                get(fmt::format("/api/clusters/{}/timeline", c));
              }
              get("/api/clusters/6/timeline", 404);

              auto tweets = pipeline::load_clean_tweets(a.out);
              for (std::size_t i = 0; i < tweets.size(); i += tweets.size() / 7) {
                const auto& t = tweets[i];
                auto r = cli.Post("/api/search", json{{"query", t.full_text}, {"k", 3}}.dump(), "application/json");
                if (!r || r->status != 200) {
                  o.require(false, "search failed for " + t.id);
                  continue;
                }
                auto res = json::parse(r->body).at("results");
                o.require(!res.empty() && res[0].at("similarity").get<double>() >= 0.999,
                          "self-match similarity for " + t.id);
                // Identical texts tie at similarity 1; the queried tweet must be among the tied leaders.
                bool self = false;
                for (const auto& h : res)
                  if (h.at("id") == t.id || (h.at("similarity").get<double>() >= 0.999 && h.at("text") == t.full_text)) self = true;
                o.require(!res.empty() && (res[0].at("id") == t.id || res[0].at("text") == t.full_text) && self,
                          "self-match not first for " + t.id);
              }
              auto bad = cli.Post("/api/search", "{}", "application/json");
              o.require(bad && bad->status == 400, "search without query");

              for (const auto& type : graphs::all_graph_types()) {
                auto name = type.str();
                auto dir = a.out / pipeline::paths::graph_dir(type);
                get("/api/graphs/" + name + "/stats");
                for (std::string kind : {"wcc", "scc"}) {
                  auto list = get("/api/graphs/" + name + "/components?kind=" + kind);
                  auto persisted = json::parse(util::read_file(dir / ("components_" + kind + ".json")));
                  o.require(list.at("profiles") == persisted, name + " " + kind + " profiles differ from JSON report");
                  auto rows = csv_rows(dir / ("components_" + kind + ".csv"));
                  o.require(list.at("csv_rows").get<std::vector<std::string>>() == rows, name + " " + kind + " rows differ from CSV report");
                  if (persisted.empty()) continue;
                  auto one = get("/api/graphs/" + name + "/components/1?kind=" + kind + "&limit=5");
                  o.require(one.at("profile") == persisted[0], name + " component 1 profile");
                  o.require(one.at("csv_row") == rows.at(0), name + " component 1 csv row");
                  o.require(one.at("nodes").at("items").size() <= 5, "node paging");
                }
              }
              get("/api/graphs/user-like/stats", 404);
              get("/api/tweets/" + tweets[0].id);
              get("/api/tweets/" + truth.spam_ids[0]);
              get("/api/tweets/0", 404);
              auto del = cli.Delete("/api/clusters");
              o.require(del && del->status == 405, "DELETE -> 405");
              auto again = cli.Get("/api/clusters");
              o.require(again && again->body == cli.Get("/api/clusters")->body, "repeated reads differ");
              server.stop();
            });

  fmt::print("{} criteria failed\n", failures);
  return failures;
}
