#include "ctscope/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "ctscope/error.hpp"
#include "ctscope/kernels.hpp"
#include "ctscope/util.hpp"

namespace ctscope::embedding {

std::vector<double> EmbeddingMatrix::to_double() const { return {values.begin(), values.end()}; }

void EmbeddingMatrix::validate() const {
  if (dim == 0) throw ShapeError("embedding dim must be positive");
  if (values.size() != ids.size() * dim) throw ShapeError("embedding value count does not match ids x dim");
  std::unordered_set<std::string_view> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw DataError("duplicate embedding id " + id);
  }
  for (float v : values) {
    if (!std::isfinite(v)) throw DataError("non-finite embedding value");
  }
}

std::vector<std::string> EmbeddingMatrix::zero_rows() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < rows(); ++i) {
    auto r = row(i);
    if (std::all_of(r.begin(), r.end(), [](float v) { return v == 0.0f; })) out.push_back(ids[i]);
  }
  return out;
}

EmbeddingMatrix EmbeddingMatrix::without(const std::vector<std::string>& drop) const {
  std::unordered_set<std::string> d(drop.begin(), drop.end());
  EmbeddingMatrix out;
  out.dim = dim;
  for (std::size_t i = 0; i < rows(); ++i) {
    if (d.count(ids[i])) continue;
    out.ids.push_back(ids[i]);
    auto r = row(i);
    out.values.insert(out.values.end(), r.begin(), r.end());
  }
  return out;
}

std::string to_emb1(const EmbeddingMatrix& m) {
  std::string out = "EMB1";
  util::put_u32(out, static_cast<std::uint32_t>(m.dim));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.ids[i].size() > 0xFFFF) throw DataError("id too long for EMB1: " + m.ids[i]);
    util::put_u16(out, static_cast<std::uint16_t>(m.ids[i].size()));
    out += m.ids[i];
    for (float v : m.row(i)) util::put_f32(out, v);
  }
  return out;
}

EmbeddingMatrix from_emb1(std::string_view bytes) {
  util::ByteReader r(bytes);
  if (r.bytes(4) != "EMB1") throw DataError("not an EMB1 file");
  EmbeddingMatrix m;
  m.dim = r.u32();
  if (m.dim == 0) throw ShapeError("EMB1 dim is zero");
  while (!r.at_end()) {
    auto len = r.u16();
    m.ids.emplace_back(r.bytes(len));
    for (std::size_t j = 0; j < m.dim; ++j) m.values.push_back(r.f32());
  }
  m.validate();
  return m;
}

std::string to_tsv(const EmbeddingMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += m.ids[i];
    out += '\t';
    auto r = m.row(i);
    for (std::size_t j = 0; j < m.dim; ++j) {
      if (j) out += ',';
      out += util::format_double(static_cast<double>(r[j]));
    }
    out += '\n';
  }
  return out;
}

EmbeddingMatrix from_tsv(std::string_view text) {
  EmbeddingMatrix m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected id<TAB>values", line_no);
    auto parts = util::split(util::trim(std::string_view(line).substr(tab + 1)), ',');
    if (m.dim == 0) m.dim = parts.size();
    if (parts.size() != m.dim) throw ParseError("inconsistent vector length", line_no);
    m.ids.push_back(line.substr(0, tab));
    for (const auto& p : parts) {
      auto v = util::parse_double(util::trim(p));
      if (!v) throw ParseError("bad float '" + p + "'", line_no);
      m.values.push_back(static_cast<float>(*v));
    }
  }
  m.validate();
  return m;
}

void save_matrix(const EmbeddingMatrix& m, const std::filesystem::path& path) { util::write_file(path, to_emb1(m)); }

EmbeddingMatrix load_matrix(const std::filesystem::path& path) {
  auto bytes = util::read_file(path);
  if (bytes.size() >= 4 && bytes.compare(0, 4, "EMB1") == 0) return from_emb1(bytes);
  return from_tsv(bytes);
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t hash64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ splitmix64(seed);
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h);
}

NgramEmbedding hashed_ngram_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
  if (dim < 8) throw ConfigError("hashed embedding dim must be >= 8");
  NgramEmbedding out;
  out.values.assign(dim, 0.0);
  auto lower = util::to_lower(text);
  std::string_view s(lower);
  for (std::size_t n = 3; n <= 5; ++n) {
    if (s.size() < n) break;
    for (std::size_t i = 0; i + n <= s.size(); ++i) {
      auto h = hash64(s.substr(i, n), seed);
      double sign = (h >> 63) ? -1.0 : 1.0;
      out.values[h % dim] += sign;
    }
  }
  double norm2 = 0.0;
  for (double v : out.values) norm2 += v * v;
  if (norm2 == 0.0) {
    out.zero = true;
    return out;
  }
  double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : out.values) v *= inv;
  return out;
}

HashedNgramProvider::HashedNgramProvider(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim < 8) throw ConfigError("hashed embedding dim must be >= 8");
}

std::vector<float> HashedNgramProvider::embed_text(std::string_view norm_text) const {
  auto e = hashed_ngram_embed(norm_text, dim_, seed_);
  return {e.values.begin(), e.values.end()};
}

EmbeddingMatrix HashedNgramProvider::embed(const std::vector<ingest::CleanTweet>& tweets) const {
  EmbeddingMatrix m;
  m.dim = dim_;
  m.ids.reserve(tweets.size());
  for (const auto& t : tweets) m.ids.push_back(t.id);
  m.values.assign(tweets.size() * dim_, 0.0f);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tweets.size()); ++i) {
    auto e = hashed_ngram_embed(tweets[i].norm_text, dim_, seed_);
    std::copy(e.values.begin(), e.values.end(), m.values.begin() + i * static_cast<std::ptrdiff_t>(dim_));
  }
  return m;
}

PrecomputedProvider::PrecomputedProvider(EmbeddingMatrix vectors) : vectors_(std::move(vectors)) {
  vectors_.validate();
  for (std::size_t i = 0; i < vectors_.rows(); ++i) index_.emplace(vectors_.ids[i], i);
}

PrecomputedProvider PrecomputedProvider::load(const std::filesystem::path& path) {
  return PrecomputedProvider(load_matrix(path));
}

EmbeddingMatrix PrecomputedProvider::embed(const std::vector<ingest::CleanTweet>& tweets) const {
  std::vector<std::string> missing;
  for (const auto& t : tweets) {
    if (!index_.count(t.id)) missing.push_back(t.id);
  }
  if (!missing.empty()) {
    std::string msg = "precomputed vectors missing " + std::to_string(missing.size()) + " id(s):";
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 20); ++i) msg += " " + missing[i];
    throw CoverageError(msg, std::move(missing));
  }
  EmbeddingMatrix m;
  m.dim = vectors_.dim;
  for (const auto& t : tweets) {
    m.ids.push_back(t.id);
    auto r = vectors_.row(index_.at(t.id));
    m.values.insert(m.values.end(), r.begin(), r.end());
  }
  return m;
}

EmbeddingMatrix embed_corpus(const std::vector<ingest::CleanTweet>& tweets, const EmbeddingProvider& provider) {
  auto m = provider.embed(tweets);
  m.validate();
  return m;
}

ReducerModel fit_reducer(const EmbeddingMatrix& m, std::size_t latent_dim) {
  const std::size_t n = m.rows();
  const std::size_t d = m.dim;
  if (latent_dim == 0) throw ConfigError("latent_dim must be positive");
  if (latent_dim > d) {
    throw ConfigError("latent_dim " + std::to_string(latent_dim) + " exceeds input dim " + std::to_string(d));
  }
  if (n < 2) throw DataError("reducer needs at least 2 rows");

  ReducerModel model;
  model.input_dim = d;
  model.latent_dim = latent_dim;
  model.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < d; ++j) model.mean[static_cast<Eigen::Index>(j)] += r[j];
  }
  model.mean /= static_cast<double>(n);

  // Column-major centered copy: column j of the data is row j here.
  std::vector<double> centered_t(d * n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < d; ++j) centered_t[j * n + i] = r[j] - model.mean[static_cast<Eigen::Index>(j)];
  }
  std::vector<double> cov(d * d);
  kernels::parallel::gram({centered_t.data(), d, n}, cov);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> cov_map(
      cov.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov_map);
  if (solver.info() != Eigen::Success) throw DataError("eigendecomposition did not converge");
  const auto& evals = solver.eigenvalues();   // ascending
  const auto& evecs = solver.eigenvectors();  // columns

  const auto di = static_cast<Eigen::Index>(d);
  const auto ki = static_cast<Eigen::Index>(latent_dim);
  model.eigenvalues.resize(di);
  model.encoder.resize(ki, di);
  for (Eigen::Index r = 0; r < di; ++r) model.eigenvalues[r] = std::max(0.0, evals[di - 1 - r]);
  for (Eigen::Index r = 0; r < ki; ++r) {
    Eigen::VectorXd dir = evecs.col(di - 1 - r);
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < di; ++j) {
      if (std::abs(dir[j]) > std::abs(dir[arg])) arg = j;
    }
    if (dir[arg] < 0) dir = -dir;
    model.encoder.row(r) = dir.transpose();
  }
  model.decoder = model.encoder.transpose();

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>> xc(
      centered_t.data(), static_cast<Eigen::Index>(n), di);
  Eigen::MatrixXd residual = xc - (xc * model.decoder) * model.encoder;
  model.train_mse = residual.squaredNorm() / (static_cast<double>(n) * static_cast<double>(d));
  return model;
}

Eigen::VectorXd encode(const ReducerModel& model, std::span<const double> v) {
  if (v.size() != model.input_dim) {
    throw ShapeError("encode: expected dim " + std::to_string(model.input_dim) + ", got " + std::to_string(v.size()));
  }
  Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
  return model.encoder * (x - model.mean);
}

Eigen::VectorXd decode(const ReducerModel& model, std::span<const double> z) {
  if (z.size() != model.latent_dim) {
    throw ShapeError("decode: expected dim " + std::to_string(model.latent_dim) + ", got " + std::to_string(z.size()));
  }
  Eigen::Map<const Eigen::VectorXd> zz(z.data(), static_cast<Eigen::Index>(z.size()));
  return model.decoder * zz + model.mean;
}

EmbeddingMatrix encode_matrix(const ReducerModel& model, const EmbeddingMatrix& m) {
  if (m.dim != model.input_dim) throw ShapeError("encode_matrix: dimension mismatch");
  EmbeddingMatrix out;
  out.ids = m.ids;
  out.dim = model.latent_dim;
  out.values.assign(m.rows() * model.latent_dim, 0.0f);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m.rows()); ++i) {
    auto r = m.row(static_cast<std::size_t>(i));
    std::vector<double> v(r.begin(), r.end());
    Eigen::VectorXd z = encode(model, v);
    for (std::size_t j = 0; j < model.latent_dim; ++j) {
      out.values[static_cast<std::size_t>(i) * model.latent_dim + j] = static_cast<float>(z[static_cast<Eigen::Index>(j)]);
    }
  }
  return out;
}

namespace {
constexpr std::uint32_t kReducerVersion = 1;
}

std::string to_bytes(const ReducerModel& model) {
  std::string out = "RDM1";
  util::put_u32(out, kReducerVersion);
  util::put_u32(out, static_cast<std::uint32_t>(model.input_dim));
  util::put_u32(out, static_cast<std::uint32_t>(model.latent_dim));
  util::put_f64(out, model.train_mse);
  for (Eigen::Index j = 0; j < model.mean.size(); ++j) util::put_f32(out, static_cast<float>(model.mean[j]));
  for (Eigen::Index j = 0; j < model.eigenvalues.size(); ++j) util::put_f32(out, static_cast<float>(model.eigenvalues[j]));
  for (Eigen::Index r = 0; r < model.encoder.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.encoder.cols(); ++c) util::put_f32(out, static_cast<float>(model.encoder(r, c)));
  }
  return out;
}

ReducerModel reducer_from_bytes(std::string_view bytes) {
  util::ByteReader r(bytes);
  if (r.bytes(4) != "RDM1") throw DataError("not a reducer model file");
  if (r.u32() != kReducerVersion) throw DataError("unsupported reducer model version");
  ReducerModel m;
  m.input_dim = r.u32();
  m.latent_dim = r.u32();
  if (m.latent_dim == 0 || m.latent_dim > m.input_dim) throw DataError("corrupt reducer model dims");
  m.train_mse = r.f64();
  const auto d = static_cast<Eigen::Index>(m.input_dim);
  const auto k = static_cast<Eigen::Index>(m.latent_dim);
  m.mean.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) m.mean[j] = r.f32();
  m.eigenvalues.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) m.eigenvalues[j] = r.f32();
  m.encoder.resize(k, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m.encoder(i, j) = r.f32();
  }
  if (!r.at_end()) throw DataError("trailing bytes in reducer model file");
  m.decoder = m.encoder.transpose();
  return m;
}

NnIndex::NnIndex(const EmbeddingMatrix& m, const std::vector<int>& cluster_tags) : dim_(m.dim) {
  if (!cluster_tags.empty() && cluster_tags.size() != m.rows()) throw ShapeError("cluster tag count does not match rows");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    double norm2 = 0.0;
    for (float v : r) norm2 += static_cast<double>(v) * v;
    if (norm2 == 0.0) {
      excluded_.push_back(m.ids[i]);
      continue;
    }
    double inv = 1.0 / std::sqrt(norm2);
    pos_.emplace(m.ids[i], ids_.size());
    ids_.push_back(m.ids[i]);
    for (float v : r) rows_.push_back(static_cast<double>(v) * inv);
    tags_.push_back(cluster_tags.empty() ? -1 : cluster_tags[i]);
  }
}

std::optional<std::size_t> NnIndex::find(const std::string& id) const {
  auto it = pos_.find(id);
  if (it == pos_.end()) return std::nullopt;
  return it->second;
}

std::vector<Neighbor> NnIndex::search(std::span<const double> query, std::size_t k,
                                      std::optional<int> cluster_filter) const {
  if (query.size() != dim_) {
    throw ShapeError("query dim " + std::to_string(query.size()) + " does not match index dim " + std::to_string(dim_));
  }
  if (k == 0) throw ConfigError("k must be >= 1");
  double norm2 = 0.0;
  for (double v : query) norm2 += v * v;
  if (norm2 == 0.0 || !std::isfinite(norm2)) throw DataError("cosine similarity undefined for a zero query vector");
  std::vector<double> q(query.begin(), query.end());
  double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : q) v *= inv;

  std::vector<double> scores(ids_.size());
  kernels::parallel::dot_scores({rows_.data(), ids_.size(), dim_}, q, scores);

  std::vector<std::size_t> cand;
  cand.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!cluster_filter || tags_[i] == *cluster_filter) cand.push_back(i);
  }
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids_[a] < ids_[b];
  };
  std::size_t take = std::min(k, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end(), better);
  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({ids_[cand[i]], scores[cand[i]], tags_[cand[i]]});
  return out;
}

}  // namespace ctscope::embedding
