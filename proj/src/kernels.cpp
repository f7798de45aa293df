#include "hodge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>

namespace hodge::kernels {

namespace {
int g_max_threads = 0;  // 0: OpenMP default

int threads_for(std::size_t work) {
  if (work < 2 * kReduceBlock) return 1;
  int t = g_max_threads > 0 ? g_max_threads : omp_get_max_threads();
  return std::max(1, t);
}
}  // namespace

void set_max_threads(int n) { g_max_threads = std::max(0, n); }
int max_threads() { return g_max_threads > 0 ? g_max_threads : omp_get_max_threads(); }

Csr csr_from_triplets(int rows, int cols, std::vector<Triplet> trip) {
  // bucket by row, then sort the short rows by column and merge duplicates
  std::vector<int> start(rows + 1, 0);
  for (const auto& t : trip) start[t.row + 1]++;
  for (int r = 0; r < rows; ++r) start[r + 1] += start[r];
  std::vector<std::pair<int, double>> ent(trip.size());
  {
    std::vector<int> pos(start.begin(), start.end() - 1);
    for (const auto& t : trip) ent[pos[t.row]++] = {t.col, t.val};
  }
  trip = {};
  Csr m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  m.col.reserve(ent.size());
  m.val.reserve(ent.size());
  for (int r = 0; r < rows; ++r) {
    auto b = ent.begin() + start[r], e = ent.begin() + start[r + 1];
    std::sort(b, e, [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto i = b; i != e;) {
      auto j = i;
      double v = 0.0;
      while (j != e && j->first == i->first) v += (j++)->second;
      if (v != 0.0) {
        m.col.push_back(i->first);
        m.val.push_back(v);
      }
      i = j;
    }
    m.row_ptr[r + 1] = static_cast<int>(m.col.size());
  }
  return m;
}

Csr transpose(const Csr& a) {
  Csr t;
  t.rows = a.cols;
  t.cols = a.rows;
  t.row_ptr.assign(a.cols + 1, 0);
  for (int c : a.col) t.row_ptr[c + 1]++;
  for (int r = 0; r < a.cols; ++r) t.row_ptr[r + 1] += t.row_ptr[r];
  t.col.resize(a.nnz());
  t.val.resize(a.nnz());
  std::vector<int> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (int r = 0; r < a.rows; ++r)
    for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      int p = next[a.col[k]]++;
      t.col[p] = r;
      t.val[p] = a.val[k];
    }
  return t;
}

namespace serial {

void spmv(const Csr& a, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < a.rows; ++r) {
    double s = 0.0;
    for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[r] = s;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  for (double& v : x) v *= a;
}

}  // namespace serial

namespace omp {

void spmv(const Csr& a, std::span<const double> x, std::span<double> y) {
  const int n = a.rows;
#pragma omp parallel for schedule(static) num_threads(threads_for(a.nnz()))
  for (int r = 0; r < n; ++r) {
    double s = 0.0;
    for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.val[k] * x[a.col[k]];
    y[r] = s;
  }
}

// Fixed blocks, partials summed in block order: bit-identical for any
// thread count.
double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const std::size_t nb = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> part(nb, 0.0);
  const long long nbl = static_cast<long long>(nb);
#pragma omp parallel for schedule(static) num_threads(threads_for(n))
  for (long long b = 0; b < nbl; ++b) {
    const std::size_t lo = b * kReduceBlock, hi = std::min(n, lo + kReduceBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
    part[b] = s;
  }
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const long long n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(static) num_threads(threads_for(x.size()))
  for (long long i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  const long long n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(static) num_threads(threads_for(x.size()))
  for (long long i = 0; i < n; ++i) x[i] *= a;
}

}  // namespace omp

void spmv(const Csr& a, std::span<const double> x, std::span<double> y) { omp::spmv(a, x, y); }

std::vector<double> spmv(const Csr& a, std::span<const double> x) {
  std::vector<double> y(a.rows);
  omp::spmv(a, x, y);
  return y;
}

double dot(std::span<const double> x, std::span<const double> y) { return omp::dot(x, y); }
double norm2(std::span<const double> x) { return std::sqrt(omp::dot(x, x)); }
void axpy(double a, std::span<const double> x, std::span<double> y) { omp::axpy(a, x, y); }
void scale(double a, std::span<double> x) { omp::scale(a, x); }

}  // namespace hodge::kernels
