#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ctscope/embedding.hpp"

namespace ctscope::clustering {

struct KMeansOptions {
  std::size_t k = 6;
  std::uint64_t seed = 42;
  double tol = 1e-6;  // on max centroid displacement
  int max_iter = 300;
};

struct ClusterModel {
  std::size_t k = 0;
  std::size_t latent_dim = 0;
  std::vector<double> centroids;  // k x latent_dim, row-major
  std::vector<std::string> ids;
  std::vector<int> assignments;   // parallel to ids
  std::uint64_t seed = 0;
  double inertia = 0.0;
  int iterations_run = 0;
  std::vector<double> inertia_trace;  // after every assignment step
  std::optional<int> parent_cluster;

  std::span<const double> centroid(std::size_t c) const { return {centroids.data() + c * latent_dim, latent_dim}; }
  std::vector<std::size_t> sizes() const;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw; the same on
/// every standard library, unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng);

std::size_t count_distinct_rows(std::span<const double> data, std::size_t n, std::size_t dim);

/// k-means++ seeding from mt19937_64(seed), then Lloyd iterations. An empty
/// cluster is reseeded at the point farthest from its assigned centroid.
/// Assignments are nearest-centroid with ties to the lowest id.
ClusterModel kmeans_fit(std::span<const double> data, std::size_t n, std::size_t dim, const KMeansOptions& opts);
ClusterModel kmeans_fit(const embedding::EmbeddingMatrix& m, const KMeansOptions& opts);

int assign(const ClusterModel& model, std::span<const double> v);

/// Fits an independent model over the rows of `data` assigned to `cluster_id`
/// by `parent`. `data` must carry the same ids, in order, as the parent.
ClusterModel subcluster(const ClusterModel& parent, int cluster_id, const embedding::EmbeddingMatrix& data,
                        const KMeansOptions& opts);

std::string to_bytes(const ClusterModel& model);
/// Restores centroids and scalar fields; ids and assignments live in the CSV.
ClusterModel cluster_model_from_bytes(std::string_view bytes);

/// tweet_id,cluster_id,subcluster_id with the subcluster column empty when
/// the tweet's cluster was not sub-clustered.
std::string assignments_csv(const ClusterModel& model, const std::vector<ClusterModel>& subclusters);

}  // namespace ctscope::clustering
