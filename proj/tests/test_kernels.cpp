#include <doctest.h>

#include <random>

#include "hodge/kernels.hpp"

using namespace hodge::kernels;

namespace {

Csr random_csr(int rows, int cols, int per_row, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> c(0, cols - 1);
  std::normal_distribution<double> v;
  std::vector<Triplet> t;
  for (int r = 0; r < rows; ++r)
    for (int k = 0; k < per_row; ++k) t.push_back({r, c(rng), v(rng)});
  return csr_from_triplets(rows, cols, t);
}

std::vector<double> randv(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> x(n);
  for (double& a : x) a = d(rng);
  return x;
}

}  // namespace

TEST_CASE("triplets are merged and sorted") {
  Csr m = csr_from_triplets(2, 3, {{1, 2, 1.0}, {0, 1, 2.0}, {1, 2, 3.0}, {0, 0, -1.0}, {1, 0, 1.0}, {1, 0, -1.0}});
  CHECK(m.nnz() == 3);
  CHECK(m.row_ptr == std::vector<int>{0, 2, 3});
  CHECK(m.col == std::vector<int>{0, 1, 2});
  CHECK(m.val == std::vector<double>{-1.0, 2.0, 4.0});
  Csr t = transpose(m);
  CHECK(t.rows == 3);
  CHECK(t.row_ptr == std::vector<int>{0, 1, 2, 3});
  CHECK(t.val == std::vector<double>{-1.0, 2.0, 4.0});
}

TEST_CASE("parallel kernels agree with the serial reference") {
  for (int n : {10, 5000, 40000}) {
    Csr a = random_csr(n, n, 7, n);
    auto x = randv(n, 3);
    std::vector<double> y1(n), y2(n);
    serial::spmv(a, x, y1);
    omp::spmv(a, x, y2);
    CHECK(y1 == y2);  // row gathers have the same summation order
    double d1 = serial::dot(x, y1), d2 = omp::dot(x, y1);
    CHECK(d2 == doctest::Approx(d1).epsilon(1e-12));
    auto z1 = y1, z2 = y1;
    serial::axpy(0.5, x, z1);
    omp::axpy(0.5, x, z2);
    CHECK(z1 == z2);
  }
}

TEST_CASE("blocked dot is bit-identical across thread counts") {
  auto x = randv(100000, 11), y = randv(100000, 12);
  set_max_threads(1);
  double ref = dot(x, y);
  for (int t : {2, 3, 4, 8}) {
    set_max_threads(t);
    CHECK(dot(x, y) == ref);
  }
  set_max_threads(0);
}

TEST_CASE("small inputs use one block, matching the serial sum exactly") {
  auto x = randv(1000, 5), y = randv(1000, 6);
  CHECK(omp::dot(x, y) == serial::dot(x, y));
}
