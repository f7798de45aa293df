#pragma once
// Instance generators: triangulated 3-balls X with a collapsing sequence
// and a subcomplex K of prescribed topology.

#include <cstdint>
#include <string>
#include <vector>

#include "hodge/complex.hpp"

namespace hodge::gen {

enum class KKind {
  Full,            // K = X
  Disk,            // planar square sheet, beta_1 = 0
  PuncturedDisk,   // planar sheet with `genus` unit-square holes
  Tunnels,         // X minus `genus` vertical tubes of cubes
  Sphere,          // boundary surface of X, beta_2 = 1
  Loop,            // boundary of one unit square, beta_1 = 1
  RandomTriangles  // closure of a random triangle subset
};

struct KSpec {
  KKind kind = KKind::Full;
  int genus = 0;
  double density = 0.5;
  std::uint64_t seed = 1;
};

/// Kuhn (6 tets per cube) triangulation of an nx x ny x nz box.
RawComplex grid_box(int nx, int ny, int nz, const KSpec& k);
RawComplex grid_ball(int k, const KSpec& ks);
/// Chain of k tetrahedra glued along facets, vertices on the moment curve.
RawComplex ball(int k, const KSpec& ks);
/// Box just large enough to hold a planar sheet with g holes.
RawComplex punctured_disk(int g);
RawComplex annulus_in_ball(int size);

/// Builds all faces of the given tetrahedra (vertex ids), in first-seen order.
RawComplex from_tets(const std::vector<std::pair<VertexId, Point3>>& verts,
                     const std::vector<std::array<VertexId, 4>>& tets);

/// Computes a collapsing sequence from a greedy shelling of the tetrahedra
/// and stores it in raw.collapses. Throws InvalidParams if none is found.
void attach_collapses(RawComplex& raw);

/// Sets in_K to the face closure of the given simplices (dim, index).
void set_K_closure(RawComplex& raw, const std::vector<SimplexRef>& top);

/// Named generator used by the CLI and tests: kind in
/// {ball, grid_ball, punctured_disk, annulus_in_ball}.
RawComplex generate(const std::string& kind, int size, int genus, std::uint64_t seed);

}  // namespace hodge::gen
