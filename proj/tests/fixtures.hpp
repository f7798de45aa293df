#pragma once
// Small hand-built complexes shared by the unit tests.

#include <random>

#include "hodge/complex.hpp"
#include "hodge/generators.hpp"

namespace fx {

using namespace hodge;

inline RawComplex tetrahedron(const std::vector<SimplexRef>& k_top = {}) {
  std::vector<std::pair<VertexId, Point3>> v{{0, {0, 0, 0}}, {1, {1, 0, 0}}, {2, {0, 1, 0}}, {3, {0, 0, 1}}};
  RawComplex raw = gen::from_tets(v, {{0, 1, 2, 3}});
  gen::set_K_closure(raw, k_top);
  gen::attach_collapses(raw);
  return raw;
}

inline RawComplex two_tets() {
  std::vector<std::pair<VertexId, Point3>> v{
      {0, {0, 0, 0}}, {1, {1, 0, 0}}, {2, {0, 1, 0}}, {3, {0, 0, 1}}, {4, {1, 1, 1}}};
  RawComplex raw = gen::from_tets(v, {{0, 1, 2, 3}, {1, 2, 3, 4}});
  gen::attach_collapses(raw);
  return raw;
}

inline std::vector<double> random_ints(std::size_t n, std::mt19937_64& rng, int lo = -5, int hi = 5) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace fx
