#include <doctest.h>

#include <json.hpp>

#include "ctscope/api.hpp"
#include "ctscope/error.hpp"
#include "ctscope/util.hpp"
#include "unit/small_run.hpp"

using namespace ctscope;
using nlohmann::json;

namespace {

const api::ApiService& service() {
  static const api::ApiService svc(testing_support::small_run().config.output_dir);
  return svc;
}

json get(const std::string& path, const api::Query& q = {}, int expect = 200) {
  auto r = service().handle("GET", path, q);
  CHECK_MESSAGE(r.status == expect, path << " -> " << r.status << " " << r.body);
  return json::parse(r.body);
}

}  // namespace

TEST_CASE("api refuses an incomplete artifact directory") {
  auto d = std::filesystem::temp_directory_path() / "ctscope_unit_api_empty";
  std::filesystem::create_directories(d);
  CHECK_THROWS_AS(api::ApiService{d}, DependencyError);
}

TEST_CASE("api manifest, volume and clusters") {
  const auto& run = testing_support::small_run();
  auto m = get("/api/manifest");
  CHECK(m.at("counts").at("final") == run.manifest.counts.final_count);
  CHECK(service().handle("GET", "/api/manifest").body ==
        service().handle("GET", "/api/manifest").body);

  auto v = get("/api/volume");
  CHECK(v.at("bin_ms") == ingest::kTwelveHoursMs);
  std::size_t raw = 0, clean = 0;
  for (const auto& b : v.at("raw")) raw += b.at("count").get<std::size_t>();
  for (const auto& b : v.at("clean")) clean += b.at("count").get<std::size_t>();
  CHECK(raw == run.manifest.counts.raw);
  CHECK(clean == run.manifest.counts.final_count);
  CHECK(get("/api/volume", {{"bin_ms", "3600000"}}).at("raw").size() > v.at("raw").size());
  get("/api/volume", {{"bin_ms", "0"}}, 400);
  get("/api/volume", {{"bin_ms", "abc"}}, 400);

  auto c = get("/api/clusters");
  CHECK(c.at("k") == 6);
  CHECK(c.at("total") == run.manifest.counts.final_count);
}

TEST_CASE("api keywords and timelines") {
  auto kw = get("/api/clusters/0/keywords");
  CHECK(kw.at("cluster_id") == 0);
  CHECK(kw.at("report").contains("ranked_terms"));
  get("/api/clusters/0/keywords", {{"sentiment", "positive"}});
  get("/api/clusters/0/keywords", {{"sentiment", "happy"}}, 400);
  get("/api/clusters/99/keywords", {}, 404);

  auto tl = get("/api/clusters/1/timeline");
  std::size_t n = 0;
  for (const auto& b : tl.at("bins")) {
    n += b.at("n").get<std::size_t>();
    if (b.at("n") == 0) continue;
    double s = b.at("ratio_pos").get<double>() + b.at("ratio_neu").get<double>() + b.at("ratio_neg").get<double>();
    CHECK(s == doctest::Approx(1.0));
  }
  auto clusters = get("/api/clusters").at("clusters");
  bool found = false;
  for (const auto& cl : clusters) {
    if (cl.at("cluster_id") == 1) {
      CHECK(cl.at("size") == n);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("api search") {
  const auto& run = testing_support::small_run();
  auto tweets = pipeline::load_clean_tweets(run.config.output_dir);
  const auto& t = tweets[tweets.size() / 2];
  auto r = service().handle("POST", "/api/search", {}, json{{"query", t.full_text}, {"k", 5}}.dump());
  REQUIRE(r.status == 200);
  auto j = json::parse(r.body);
  REQUIRE(j.at("results").size() == 5);
  CHECK(j.at("results")[0].at("similarity").get<double>() >= 0.999);
  for (std::size_t i = 1; i < 5; ++i)
    CHECK(j.at("results")[i - 1].at("similarity").get<double>() >= j.at("results")[i].at("similarity").get<double>());

  auto f = json::parse(service().handle("POST", "/api/search", {}, json{{"query", "ftx collapse"}, {"k", 10}, {"cluster_id", 2}}.dump()).body);
  for (const auto& h : f.at("results")) CHECK(h.at("cluster_id") == 2);

  CHECK(service().handle("GET", "/api/search").status == 405);
  CHECK(service().handle("POST", "/api/search", {}, "{nope").status == 400);
  CHECK(service().handle("POST", "/api/search", {}, json{{"k", 3}}.dump()).status == 400);
  CHECK(service().handle("POST", "/api/search", {}, json{{"query", "x"}, {"k", 0}}.dump()).status == 400);
}

TEST_CASE("api graphs") {
  const auto& run = testing_support::small_run();
  auto s = get("/api/graphs/user-reply/stats");
  CHECK(s.at("stats").contains("n_nodes"));
  get("/api/graphs/user-like/stats", {}, 404);

  auto comps = get("/api/graphs/user-reply/components", {{"kind", "scc"}});
  REQUIRE(!comps.at("profiles").empty());
  auto dir = run.config.output_dir / pipeline::paths::graph_dir(*graphs::GraphType::parse("user-reply"));
  auto csv = util::read_file(dir / "components_scc.csv");
  for (const auto& row : comps.at("csv_rows")) CHECK(csv.find(row.get<std::string>()) != std::string::npos);
  get("/api/graphs/user-reply/components", {{"kind", "xcc"}}, 400);

  auto one = get("/api/graphs/user-reply/components/1", {{"kind", "scc"}, {"limit", "3"}});
  CHECK(one.at("profile").at("rank") == 1);
  CHECK(one.at("nodes").at("items").size() <= 3);
  CHECK(one.at("nodes").at("page").at("total") == one.at("profile").at("size"));
  get("/api/graphs/user-reply/components/100000", {{"kind", "scc"}}, 404);
}

TEST_CASE("api tweets and errors") {
  const auto& run = testing_support::small_run();
  auto tweets = pipeline::load_clean_tweets(run.config.output_dir);
  auto kept = get("/api/tweets/" + tweets[0].id);
  CHECK(kept.at("tweet").at("status") == "kept");
  auto spam = get("/api/tweets/" + run.fixture.truth.spam_ids[0]);
  CHECK(spam.at("tweet").at("status") == "spam_removed");
  auto noise = get("/api/tweets/" + run.fixture.truth.noise_ids[0]);
  CHECK(noise.at("tweet").at("status") == "keyword_dropped");
  auto missing = get("/api/tweets/nope", {}, 404);
  CHECK(missing.contains("error"));
  CHECK(missing.at("schema_version") == 1);
  get("/api/nothing", {}, 404);
  CHECK(service().handle("DELETE", "/api/clusters").status == 405);
}
