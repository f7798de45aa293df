#pragma once
// Matrix-free linear operators on chains.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hodge {

using Vecd = std::vector<double>;
using ApplyFn = std::function<Vecd(std::span<const double>)>;

struct LinOp {
  std::string name;
  int rows = 0;
  int cols = 0;
  ApplyFn apply;
  ApplyFn apply_t;  // may be empty for symmetric operators

  Vecd operator()(std::span<const double> x) const { return apply(x); }
  LinOp transposed() const;
};

/// Estimate of ‖A‖ by power iteration on AᵀA (never exceeds the true norm
/// beyond rounding).
double power_norm(const LinOp& a, int iters = 100, std::uint64_t seed = 7);
/// Largest eigenvalue of a symmetric PSD operator by power iteration.
double power_max_eig(int n, const ApplyFn& sym, int iters = 100, std::uint64_t seed = 7);

Vecd random_vector(std::size_t n, std::uint64_t seed);

}  // namespace hodge
