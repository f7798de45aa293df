#pragma once
// Sparse/dense vector kernels. Every routine has a serial reference
// version and an OpenMP version; the dispatching entry points use the
// OpenMP versions. Reductions are blocked with a fixed block size so the
// parallel result does not depend on the thread count.

#include <cstddef>
#include <span>
#include <vector>

namespace hodge::kernels {

inline constexpr std::size_t kReduceBlock = 4096;

/// Compressed sparse row matrix.
struct Csr {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col;
  std::vector<double> val;

  std::size_t nnz() const { return col.size(); }
};

struct Triplet {
  int row;
  int col;
  double val;
};

/// Builds a CSR matrix; duplicate entries are summed, columns sorted.
Csr csr_from_triplets(int rows, int cols, std::vector<Triplet> trip);
Csr transpose(const Csr& a);

namespace serial {
void spmv(const Csr& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
}  // namespace serial

namespace omp {
void spmv(const Csr& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
}  // namespace omp

// Dispatching entry points.
void spmv(const Csr& a, std::span<const double> x, std::span<double> y);
std::vector<double> spmv(const Csr& a, std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);

/// Upper bound on the number of OpenMP threads used by the kernels.
/// 1 forces sequential execution (deterministic mode).
void set_max_threads(int n);
int max_threads();

}  // namespace hodge::kernels
