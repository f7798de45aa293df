#pragma once
// Dual graph of an embedded 2-complex and the intermediate complex T
// (K ⊂ T ⊂ X with the same second homology as K).

#include <vector>

#include "hodge/complex.hpp"

namespace hodge {

struct DualEdge {
  int tail = 0;
  int head = 0;
  int triangle = 0;  // global X index
};

/// Nodes are the connected volumes of the complement; edge j is dual to
/// local triangle j of the scope. Column j of the incidence matrix has +1
/// at head and -1 at tail, so every node row is a 2-cycle of the scope.
struct DualGraph {
  ScopeTag scope = ScopeTag::X;
  int num_nodes = 0;
  int outer = 0;
  std::vector<DualEdge> edges;
  std::vector<int> node_of_ambient;  // ambient tet -> node
  std::vector<int> ambient_to_x;     // ambient tet -> X tet index, or -1
  std::vector<int> x_tet_of_node;    // X tet when the node is exactly one X tet, else -1
  bool connected = true;
};

/// Throws NoAmbient when no ambient triangulation is given and some
/// triangle of X is not a facet of one or two tetrahedra of X.
DualGraph build_dual_graph(const Scope& scope);

struct SqueezeStep {
  int triangle = 0;  // σ_i, global X index
  int tet = 0;       // τ_i, global X index
};

struct TConstruction {
  Scope T;
  std::vector<int> removed;  // D, global triangle indices
  std::vector<SqueezeStep> order;
  int beta2_K = -1;  // -1 when the oracle check was skipped (size cap)
  int beta2_T = -1;
};

struct BuildTOptions {
  bool verify_h2 = true;
  std::size_t dense_cap = 2000;
};

/// Throws SpanningTreeBlocked, H2Mismatch.
TConstruction build_T(const Scope& x_scope, const DualGraph& dual_x, const BuildTOptions& opt = {});

/// BFS over the dual edges of X∖T from the outer node. Throws OrderInfeasible.
std::vector<SqueezeStep> squeeze_order(const Scope& x_scope, const Scope& t_scope);

}  // namespace hodge
