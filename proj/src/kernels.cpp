#include "ctscope/kernels.hpp"

#include <cassert>
#include <limits>

namespace ctscope::kernels {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace {

inline void nearest_one(MatrixView points, MatrixView centroids, std::size_t i, std::span<int> labels,
                        std::span<double> dist2) {
  auto p = points.row(i);
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows; ++c) {
    double d = squared_distance(p, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  labels[i] = best;
  dist2[i] = best_d;
}

inline void gram_row(MatrixView t, std::size_t i, std::span<double> out) {
  const std::size_t d = t.rows;
  const double inv_n = 1.0 / static_cast<double>(t.cols);
  for (std::size_t j = i; j < d; ++j) {
    double v = dot(t.row(i), t.row(j)) * inv_n;
    out[i * d + j] = v;
    out[j * d + i] = v;
  }
}

}  // namespace

namespace serial {

void nearest_centroid(MatrixView points, MatrixView centroids, std::span<int> labels, std::span<double> dist2) {
  assert(points.cols == centroids.cols);
  for (std::size_t i = 0; i < points.rows; ++i) nearest_one(points, centroids, i, labels, dist2);
}

void dot_scores(MatrixView rows, std::span<const double> query, std::span<double> out) {
  for (std::size_t i = 0; i < rows.rows; ++i) out[i] = dot(rows.row(i), query);
}

void gram(MatrixView transposed, std::span<double> out) {
  for (std::size_t i = 0; i < transposed.rows; ++i) gram_row(transposed, i, out);
}

}  // namespace serial

namespace parallel {

void nearest_centroid(MatrixView points, MatrixView centroids, std::span<int> labels, std::span<double> dist2) {
  assert(points.cols == centroids.cols);
  const auto n = static_cast<std::ptrdiff_t>(points.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) nearest_one(points, centroids, static_cast<std::size_t>(i), labels, dist2);
}

void dot_scores(MatrixView rows, std::span<const double> query, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(rows.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = dot(rows.row(static_cast<std::size_t>(i)), query);
}

void gram(MatrixView transposed, std::span<double> out) {
  const auto d = static_cast<std::ptrdiff_t>(transposed.rows);
  // Row i costs d - i dot products.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < d; ++i) gram_row(transposed, static_cast<std::size_t>(i), out);
}

}  // namespace parallel

}  // namespace ctscope::kernels
