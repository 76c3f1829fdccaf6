#include "ctscope/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "ctscope/error.hpp"
#include "ctscope/kernels.hpp"
#include "ctscope/util.hpp"

namespace ctscope::clustering {

std::vector<std::size_t> ClusterModel::sizes() const {
  std::vector<std::size_t> out(k, 0);
  for (int a : assignments) ++out[static_cast<std::size_t>(a)];
  return out;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t count_distinct_rows(std::span<const double> data, std::size_t n, std::size_t dim) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto row = [&](std::size_t i) { return data.subspan(i * dim, dim); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ra = row(a), rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  std::size_t distinct = n ? 1 : 0;
  for (std::size_t i = 1; i < n; ++i) {
    auto ra = row(order[i - 1]), rb = row(order[i]);
    if (!std::equal(ra.begin(), ra.end(), rb.begin())) ++distinct;
  }
  return distinct;
}

namespace {

struct Lloyd {
  std::span<const double> data;
  std::size_t n, dim, k;
  std::vector<double> centroids;
  std::vector<int> labels;
  std::vector<double> dist2;

  kernels::MatrixView points() const { return {data.data(), n, dim}; }
  kernels::MatrixView cents() const { return {centroids.data(), k, dim}; }
  std::span<const double> row(std::size_t i) const { return data.subspan(i * dim, dim); }

  void seed_plus_plus(std::mt19937_64& rng) {
    centroids.assign(k * dim, 0.0);
    auto first = std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
    std::copy_n(row(first).begin(), dim, centroids.begin());
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = kernels::squared_distance(row(i), row(first));
    for (std::size_t c = 1; c < k; ++c) {
      double total = 0.0;
      for (double v : d) total += v;
      double r = uniform01(rng) * total;
      std::size_t pick = n;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d[i] <= 0.0) continue;
        acc += d[i];
        pick = i;
        if (acc > r) break;
      }
      if (pick == n) throw DataError("k-means++ ran out of distinct points");
      std::copy_n(row(pick).begin(), dim, centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
      for (std::size_t i = 0; i < n; ++i) d[i] = std::min(d[i], kernels::squared_distance(row(i), row(pick)));
    }
  }

  void assign_all() { kernels::parallel::nearest_centroid(points(), cents(), labels, dist2); }

  // Returns true when any cluster was empty and got reseeded.
  bool repair_empties() {
    std::vector<std::size_t> count(k, 0);
    for (int l : labels) ++count[static_cast<std::size_t>(l)];
    bool repaired = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] != 0) continue;
      std::size_t far = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (dist2[i] > dist2[far]) far = i;
      }
      if (dist2[far] <= 0.0) throw DataError("cannot repair empty cluster: all points coincide with centroids");
      --count[static_cast<std::size_t>(labels[far])];
      ++count[c];
      labels[far] = static_cast<int>(c);
      dist2[far] = 0.0;
      std::copy_n(row(far).begin(), dim, centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
      repaired = true;
    }
    return repaired;
  }

  double inertia() const {
    double s = 0.0;
    for (double v : dist2) s += v;
    return s;
  }

  // Means with a fixed left-to-right summation order; returns max displacement.
  double update_means() {
    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto c = static_cast<std::size_t>(labels[i]);
      ++count[c];
      auto r = row(i);
      for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += r[j];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] == 0) continue;
      double moved = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        double v = sums[c * dim + j] / static_cast<double>(count[c]);
        double delta = v - centroids[c * dim + j];
        moved += delta * delta;
        centroids[c * dim + j] = v;
      }
      shift = std::max(shift, std::sqrt(moved));
    }
    return shift;
  }
};

}  // namespace

ClusterModel kmeans_fit(std::span<const double> data, std::size_t n, std::size_t dim, const KMeansOptions& opts) {
  if (opts.k == 0) throw ConfigError("k must be positive");
  if (!(opts.tol > 0.0)) throw ConfigError("tol must be positive");
  if (opts.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (dim == 0 || data.size() != n * dim) throw ShapeError("k-means data size does not match n x dim");
  auto distinct = count_distinct_rows(data, n, dim);
  if (opts.k > distinct) {
    throw DataError("infeasible: k=" + std::to_string(opts.k) + " exceeds " + std::to_string(distinct) +
                    " distinct rows");
  }

  Lloyd s{data, n, dim, opts.k, {}, std::vector<int>(n, 0), std::vector<double>(n, 0.0)};
  std::mt19937_64 rng(opts.seed);
  s.seed_plus_plus(rng);

  ClusterModel model;
  model.k = opts.k;
  model.latent_dim = dim;
  model.seed = opts.seed;

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    s.assign_all();
    s.repair_empties();
    model.inertia_trace.push_back(s.inertia());
    double shift = s.update_means();
    model.iterations_run = iter;
    if (shift < opts.tol) break;
  }
  // Final assignment against the final centroids; reseeding moves a centroid
  // onto a data point, which then needs one more assignment pass.
  std::size_t guard = 0;
  while (true) {
    s.assign_all();
    if (!s.repair_empties()) break;
    if (++guard > 4 * opts.k) throw DataError("empty-cluster repair did not settle");
  }
  model.inertia = s.inertia();
  model.inertia_trace.push_back(model.inertia);
  model.centroids = std::move(s.centroids);
  model.assignments = std::move(s.labels);
  return model;
}

ClusterModel kmeans_fit(const embedding::EmbeddingMatrix& m, const KMeansOptions& opts) {
  auto data = m.to_double();
  auto model = kmeans_fit(data, m.rows(), m.dim, opts);
  model.ids = m.ids;
  return model;
}

int assign(const ClusterModel& model, std::span<const double> v) {
  if (v.size() != model.latent_dim) {
    throw ShapeError("assign: expected dim " + std::to_string(model.latent_dim) + ", got " + std::to_string(v.size()));
  }
  int best = 0;
  double best_d = kernels::squared_distance(v, model.centroid(0));
  for (std::size_t c = 1; c < model.k; ++c) {
    double d = kernels::squared_distance(v, model.centroid(c));
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

ClusterModel subcluster(const ClusterModel& parent, int cluster_id, const embedding::EmbeddingMatrix& data,
                        const KMeansOptions& opts) {
  if (data.ids != parent.ids) throw ShapeError("subcluster: data rows do not match the parent model");
  if (cluster_id < 0 || static_cast<std::size_t>(cluster_id) >= parent.k) {
    throw ConfigError("subcluster: cluster id " + std::to_string(cluster_id) + " out of range");
  }
  embedding::EmbeddingMatrix members;
  members.dim = data.dim;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (parent.assignments[i] != cluster_id) continue;
    members.ids.push_back(data.ids[i]);
    auto r = data.row(i);
    members.values.insert(members.values.end(), r.begin(), r.end());
  }
  if (members.rows() == 0) throw DataError("subcluster: cluster " + std::to_string(cluster_id) + " is empty");
  auto model = kmeans_fit(members, opts);
  model.parent_cluster = cluster_id;
  return model;
}

namespace {
constexpr std::uint32_t kClusterVersion = 1;
}

std::string to_bytes(const ClusterModel& model) {
  std::string out = "CLM1";
  util::put_u32(out, kClusterVersion);
  util::put_u32(out, static_cast<std::uint32_t>(model.k));
  util::put_u32(out, static_cast<std::uint32_t>(model.latent_dim));
  util::put_u64(out, model.seed);
  util::put_u32(out, static_cast<std::uint32_t>(model.iterations_run));
  util::put_f64(out, model.inertia);
  util::put_u32(out, static_cast<std::uint32_t>(model.parent_cluster.value_or(-1)));
  for (double v : model.centroids) util::put_f32(out, static_cast<float>(v));
  return out;
}

ClusterModel cluster_model_from_bytes(std::string_view bytes) {
  util::ByteReader r(bytes);
  if (r.bytes(4) != "CLM1") throw DataError("not a cluster model file");
  if (r.u32() != kClusterVersion) throw DataError("unsupported cluster model version");
  ClusterModel m;
  m.k = r.u32();
  m.latent_dim = r.u32();
  m.seed = r.u64();
  m.iterations_run = static_cast<int>(r.u32());
  m.inertia = r.f64();
  auto parent = static_cast<std::int32_t>(r.u32());
  if (parent >= 0) m.parent_cluster = parent;
  m.centroids.resize(m.k * m.latent_dim);
  for (auto& v : m.centroids) v = r.f32();
  if (!r.at_end()) throw DataError("trailing bytes in cluster model file");
  return m;
}

std::string assignments_csv(const ClusterModel& model, const std::vector<ClusterModel>& subclusters) {
  std::unordered_map<std::string, int> sub;
  for (const auto& sc : subclusters) {
    for (std::size_t i = 0; i < sc.ids.size(); ++i) sub[sc.ids[i]] = sc.assignments[i];
  }
  std::string out = "tweet_id,cluster_id,subcluster_id\n";
  for (std::size_t i = 0; i < model.ids.size(); ++i) {
    out += util::csv_escape(model.ids[i]) + "," + std::to_string(model.assignments[i]) + ",";
    if (auto it = sub.find(model.ids[i]); it != sub.end()) out += std::to_string(it->second);
    out += "\n";
  }
  return out;
}

}  // namespace ctscope::clustering
