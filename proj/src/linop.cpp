#include "hodge/linop.hpp"

#include <cmath>
#include <random>

#include "hodge/kernels.hpp"

namespace hodge {

LinOp LinOp::transposed() const {
  LinOp t;
  t.name = name + "^T";
  t.rows = cols;
  t.cols = rows;
  t.apply = apply_t ? apply_t : apply;
  t.apply_t = apply;
  return t;
}

Vecd random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Vecd v(n);
  for (double& x : v) x = nd(rng);
  return v;
}

double power_max_eig(int n, const ApplyFn& sym, int iters, std::uint64_t seed) {
  if (n == 0) return 0.0;
  Vecd v = random_vector(n, seed);
  double nv = kernels::norm2(v);
  kernels::scale(1.0 / nv, v);
  double lam = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vecd w = sym(v);
    double q = kernels::dot(v, w);
    double nw = kernels::norm2(w);
    if (nw == 0.0) return 0.0;
    lam = std::max(lam, q);
    kernels::scale(1.0 / nw, w);
    v.swap(w);
  }
  return lam;
}

double power_norm(const LinOp& a, int iters, std::uint64_t seed) {
  auto ata = [&](std::span<const double> x) { return a.apply_t(a.apply(x)); };
  return std::sqrt(std::max(0.0, power_max_eig(a.cols, ata, iters, seed)));
}

}  // namespace hodge
