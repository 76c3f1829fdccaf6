#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "ctscope/kernels.hpp"

using namespace ctscope::kernels;

namespace {

std::vector<double> rand_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const std::size_t n = 997 + s * 301, d = 7 + s * 5, k = 2 + s;
    auto pts = rand_vec(n * d, s), cen = rand_vec(k * d, s + 100);
    std::vector<int> l1(n), l2(n);
    std::vector<double> d1(n), d2(n);
    serial::nearest_centroid({pts.data(), n, d}, {cen.data(), k, d}, l1, d1);
    parallel::nearest_centroid({pts.data(), n, d}, {cen.data(), k, d}, l2, d2);
    CHECK(l1 == l2);
    CHECK(bit_equal(d1, d2));

    auto q = rand_vec(d, s + 7);
    std::vector<double> o1(n), o2(n);
    serial::dot_scores({pts.data(), n, d}, q, o1);
    parallel::dot_scores({pts.data(), n, d}, q, o2);
    CHECK(bit_equal(o1, o2));

    std::vector<double> g1(d * d), g2(d * d);
    serial::gram({pts.data(), d, n}, g1);
    parallel::gram({pts.data(), d, n}, g2);
    CHECK(bit_equal(g1, g2));
  }
}

TEST_CASE("nearest_centroid ties go to the lowest index") {
  std::vector<double> pts{0.0, 0.0}, cen{1.0, 0.0, -1.0, 0.0};
  std::vector<int> l(1);
  std::vector<double> d(1);
  serial::nearest_centroid({pts.data(), 1, 2}, {cen.data(), 2, 2}, l, d);
  CHECK(l[0] == 0);
  CHECK(d[0] == 1.0);
}

TEST_CASE("gram matches a direct computation") {
  const std::size_t n = 50, d = 4;
  auto xt = rand_vec(n * d, 3);  // d x n
  std::vector<double> g(d * d);
  serial::gram({xt.data(), d, n}, g);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) s += xt[a * n + i] * xt[b * n + i];
      CHECK(g[a * d + b] == doctest::Approx(s / n).epsilon(1e-12));
      CHECK(g[a * d + b] == g[b * d + a]);
    }
  }
}
