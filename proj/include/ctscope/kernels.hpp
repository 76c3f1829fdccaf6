#pragma once

// Data-parallel inner loops. Each kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::parallel. Both compute
// every output element with the same summation order, so results are
// bit-identical regardless of thread count.

#include <cstddef>
#include <span>

namespace ctscope::kernels {

/// Row-major dense matrix view.
struct MatrixView {
  const double* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> row(std::size_t i) const { return {data + i * cols, cols}; }
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

namespace serial {

/// labels[i] = argmin_c ||x_i - c||^2, ties to the lowest centroid index;
/// dist2[i] receives the minimum.
void nearest_centroid(MatrixView points, MatrixView centroids, std::span<int> labels, std::span<double> dist2);

/// out[i] = <row_i, query>.
void dot_scores(MatrixView rows, std::span<const double> query, std::span<double> out);

/// out (cols x cols, row-major) = X^T X / X.rows for a column-major copy
/// given as `transposed` (cols x rows).
void gram(MatrixView transposed, std::span<double> out);

}  // namespace serial

namespace parallel {

void nearest_centroid(MatrixView points, MatrixView centroids, std::span<int> labels, std::span<double> dist2);
void dot_scores(MatrixView rows, std::span<const double> query, std::span<double> out);
void gram(MatrixView transposed, std::span<double> out);

}  // namespace parallel

}  // namespace ctscope::kernels
