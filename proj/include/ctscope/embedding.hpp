#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctscope/ingest.hpp"

namespace ctscope::embedding {

/// Per-tweet vectors, row-major float32 (the on-disk precision).
struct EmbeddingMatrix {
  std::vector<std::string> ids;
  std::size_t dim = 0;
  std::vector<float> values;

  std::size_t rows() const { return ids.size(); }
  std::span<const float> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
  std::span<float> row(std::size_t i) { return {values.data() + i * dim, dim}; }
  /// Row-major copy promoted to double.
  std::vector<double> to_double() const;
  /// Throws DataError unless ids are unique, sizes agree and values are finite.
  void validate() const;
  /// Ids of all-zero rows.
  std::vector<std::string> zero_rows() const;
  /// Copy restricted to the rows whose id is not in `drop`.
  EmbeddingMatrix without(const std::vector<std::string>& drop) const;
};

// EMB1 binary layout: "EMB1", u32 dim, then per record u16 id length, id bytes,
// dim little-endian float32.
std::string to_emb1(const EmbeddingMatrix& m);
EmbeddingMatrix from_emb1(std::string_view bytes);
std::string to_tsv(const EmbeddingMatrix& m);
EmbeddingMatrix from_tsv(std::string_view text);
void save_matrix(const EmbeddingMatrix& m, const std::filesystem::path& path);
/// Detects EMB1 by magic, otherwise parses TSV (id\tcomma-separated floats).
EmbeddingMatrix load_matrix(const std::filesystem::path& path);

struct NgramEmbedding {
  std::vector<double> values;
  bool zero = false;  // no n-grams: empty or very short text
};

/// Character 3-5-grams of the lowercased text, hashed with a seeded 64-bit
/// hash into `dim` buckets with +-1 signs, then L2-normalized.
NgramEmbedding hashed_ngram_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

/// Seeded 64-bit FNV-1a with a splitmix64 finalizer.
std::uint64_t hash64(std::string_view bytes, std::uint64_t seed);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  virtual std::string name() const = 0;
  virtual EmbeddingMatrix embed(const std::vector<ingest::CleanTweet>& tweets) const = 0;
};

class HashedNgramProvider final : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDefaultDim = 256;
  explicit HashedNgramProvider(std::size_t dim = kDefaultDim, std::uint64_t seed = 0);
  std::size_t dim() const override { return dim_; }
  std::string name() const override { return "hashed-ngram"; }
  EmbeddingMatrix embed(const std::vector<ingest::CleanTweet>& tweets) const override;
  std::vector<float> embed_text(std::string_view norm_text) const;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

class PrecomputedProvider final : public EmbeddingProvider {
 public:
  explicit PrecomputedProvider(EmbeddingMatrix vectors);
  static PrecomputedProvider load(const std::filesystem::path& path);
  std::size_t dim() const override { return vectors_.dim; }
  std::string name() const override { return "precomputed"; }
  /// Throws CoverageError naming every id absent from the file.
  EmbeddingMatrix embed(const std::vector<ingest::CleanTweet>& tweets) const override;

 private:
  EmbeddingMatrix vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

EmbeddingMatrix embed_corpus(const std::vector<ingest::CleanTweet>& tweets, const EmbeddingProvider& provider);

/// Closed-form optimal linear autoencoder: the encoder rows are the top
/// principal directions of the centered data and the decoder is their
/// transpose.
struct ReducerModel {
  std::size_t input_dim = 0;
  std::size_t latent_dim = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd encoder;  // latent_dim x input_dim
  Eigen::MatrixXd decoder;  // input_dim x latent_dim
  double train_mse = 0.0;
  Eigen::VectorXd eigenvalues;  // all input_dim covariance eigenvalues, descending
};

inline constexpr std::size_t kDefaultLatentDim = 32;

/// train_mse is the mean squared reconstruction error per element, equal to
/// the sum of the discarded covariance eigenvalues (1/n scaling) / input_dim.
/// Direction signs are fixed by making the largest-magnitude coordinate positive.
ReducerModel fit_reducer(const EmbeddingMatrix& m, std::size_t latent_dim);

Eigen::VectorXd encode(const ReducerModel& model, std::span<const double> v);
Eigen::VectorXd decode(const ReducerModel& model, std::span<const double> z);
/// Encodes every row; the result keeps the ids.
EmbeddingMatrix encode_matrix(const ReducerModel& model, const EmbeddingMatrix& m);

std::string to_bytes(const ReducerModel& model);
ReducerModel reducer_from_bytes(std::string_view bytes);

struct Neighbor {
  std::string id;
  double similarity = 0.0;
  int cluster = -1;
};

/// Exhaustive cosine index over unit-normalized rows. Zero rows are excluded
/// and reported.
class NnIndex {
 public:
  explicit NnIndex(const EmbeddingMatrix& m, const std::vector<int>& cluster_tags = {});

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& excluded() const { return excluded_; }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<std::size_t> find(const std::string& id) const;
  std::span<const double> unit_row(std::size_t i) const { return {rows_.data() + i * dim_, dim_}; }

  /// Top-k by cosine similarity, descending, ties by ascending id.
  std::vector<Neighbor> search(std::span<const double> query, std::size_t k,
                               std::optional<int> cluster_filter = std::nullopt) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<double> rows_;
  std::vector<int> tags_;
  std::vector<std::string> excluded_;
  std::unordered_map<std::string, std::size_t> pos_;
};

inline std::vector<Neighbor> nn_search(const NnIndex& index, std::span<const double> query, std::size_t k,
                                       std::optional<int> cluster_filter = std::nullopt) {
  return index.search(query, k, cluster_filter);
}

}  // namespace ctscope::embedding
