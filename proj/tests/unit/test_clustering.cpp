#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ctscope/clustering.hpp"
#include "ctscope/error.hpp"
#include "ctscope/kernels.hpp"

using namespace ctscope;
using namespace ctscope::clustering;

namespace {

std::vector<double> blobs(std::size_t per, std::uint64_t seed, std::vector<int>* truth = nullptr) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  const double centers[3][2] = {{0, 0}, {10, 0}, {0, 10}};
  std::vector<double> x;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < per; ++i) {
      x.push_back(centers[c][0] + g(rng));
      x.push_back(centers[c][1] + g(rng));
      if (truth) truth->push_back(c);
    }
  }
  return x;
}

}  // namespace

TEST_CASE("k=1 centroid is the mean") {
  auto x = blobs(30, 1);
  auto m = kmeans_fit(x, 90, 2, {.k = 1, .seed = 3});
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < 90; ++i) mx += x[2 * i], my += x[2 * i + 1];
  CHECK(m.centroids[0] == doctest::Approx(mx / 90).epsilon(1e-12));
  CHECK(m.centroids[1] == doctest::Approx(my / 90).epsilon(1e-12));
}

TEST_CASE("k=n distinct points gives zero inertia") {
  std::vector<double> x{0, 0, 1, 0, 0, 1, 5, 5, 2, 7};
  auto m = kmeans_fit(x, 5, 2, {.k = 5, .seed = 1});
  CHECK(m.inertia == 0.0);
  std::set<int> labels(m.assignments.begin(), m.assignments.end());
  CHECK(labels.size() == 5);
}

TEST_CASE("well separated blobs are recovered") {
  std::vector<int> truth;
  auto x = blobs(100, 2, &truth);
  auto m = kmeans_fit(x, 300, 2, {.k = 3, .seed = 42});
  for (int c = 0; c < 3; ++c) {
    std::set<int> got;
    for (std::size_t i = 0; i < 300; ++i)
      if (truth[i] == c) got.insert(m.assignments[i]);
    CHECK(got.size() == 1);
  }
  CHECK(m.sizes() == std::vector<std::size_t>{100, 100, 100});
  for (std::size_t i = 1; i < m.inertia_trace.size(); ++i) CHECK(m.inertia_trace[i] <= m.inertia_trace[i - 1]);
  CHECK(m.inertia == m.inertia_trace.back());
  for (std::size_t i = 0; i < 300; ++i) {
    std::span<const double> v(x.data() + 2 * i, 2);
    double own = kernels::squared_distance(v, m.centroid(m.assignments[i]));
    for (std::size_t c = 0; c < 3; ++c) CHECK(own <= kernels::squared_distance(v, m.centroid(c)));
    CHECK(assign(m, v) == m.assignments[i]);
  }
}

TEST_CASE("seeded fits are reproducible") {
  auto x = blobs(50, 3);
  auto a = kmeans_fit(x, 150, 2, {.k = 4, .seed = 9});
  auto b = kmeans_fit(x, 150, 2, {.k = 4, .seed = 9});
  CHECK(a.centroids == b.centroids);
  CHECK(a.assignments == b.assignments);
  CHECK(to_bytes(a) == to_bytes(b));
}

TEST_CASE("assign breaks ties toward the lower cluster id") {
  ClusterModel m;
  m.k = 2;
  m.latent_dim = 1;
  m.centroids = {-1.0, 1.0};
  CHECK(assign(m, std::vector<double>{0.0}) == 0);
  CHECK(assign(m, std::vector<double>{0.5}) == 1);
  CHECK_THROWS_AS(assign(m, std::vector<double>{0.0, 1.0}), ShapeError);
}

TEST_CASE("infeasible and non-positive k") {
  std::vector<double> x{0, 0, 0, 0, 1, 1};
  CHECK_THROWS_AS(kmeans_fit(x, 3, 2, {.k = 3}), DataError);
  CHECK_THROWS_AS(kmeans_fit(x, 3, 2, {.k = 0}), ConfigError);
  CHECK_NOTHROW(kmeans_fit(x, 3, 2, {.k = 2}));
}

TEST_CASE("subcluster fits only the chosen cluster") {
  std::vector<int> truth;
  auto x = blobs(60, 4, &truth);
  embedding::EmbeddingMatrix em;
  em.dim = 2;
  for (std::size_t i = 0; i < 180; ++i) {
    em.ids.push_back("t" + std::to_string(i));
    em.values.push_back(static_cast<float>(x[2 * i]));
    em.values.push_back(static_cast<float>(x[2 * i + 1]));
  }
  auto parent = kmeans_fit(em, {.k = 3, .seed = 42});
  int target = parent.assignments[0];
  auto sub = subcluster(parent, target, em, {.k = 2, .seed = 1});
  CHECK(sub.parent_cluster == target);
  CHECK(sub.ids.size() == parent.sizes()[static_cast<std::size_t>(target)]);
  for (const auto& id : sub.ids) {
    auto pos = std::stoul(id.substr(1));
    CHECK(parent.assignments[pos] == target);
  }
  auto csv = assignments_csv(parent, {sub});
  CHECK(csv.rfind("tweet_id,cluster_id,subcluster_id\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 181);
  CHECK_THROWS(subcluster(parent, 7, em, {.k = 2}));
}

TEST_CASE("CLM1 round trip") {
  auto x = blobs(20, 5);
  auto m = kmeans_fit(x, 60, 2, {.k = 3, .seed = 11});
  auto back = cluster_model_from_bytes(to_bytes(m));
  CHECK(back.k == m.k);
  CHECK(back.latent_dim == m.latent_dim);
  CHECK(back.seed == m.seed);
  for (std::size_t i = 0; i < m.centroids.size(); ++i)
    CHECK(back.centroids[i] == doctest::Approx(m.centroids[i]).epsilon(1e-6));
  CHECK_THROWS_AS(cluster_model_from_bytes("XXXX"), DataError);
}
