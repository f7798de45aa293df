#pragma once
// Collapsing sequences of X: validation by simulation and normalization
// (all tetrahedron-triangle pairs first).

#include <optional>
#include <string>
#include <vector>

#include "hodge/complex.hpp"

namespace hodge {

enum class CollapseKind { TetTri, TriEdge, EdgeVertex };

struct CollapsePair {
  SimplexRef coface;  // σ, dimension d
  SimplexRef face;    // τ, dimension d-1
  CollapseKind kind() const {
    return coface.dim == 3 ? CollapseKind::TetTri : coface.dim == 2 ? CollapseKind::TriEdge : CollapseKind::EdgeVertex;
  }
  bool operator==(const CollapsePair&) const = default;
};

struct CollapsingSequence {
  std::vector<CollapsePair> pairs;
  static CollapsingSequence from_complex(const EmbeddedComplex& x);
};

struct ValidationReport {
  bool ok = true;
  std::optional<std::size_t> first_violation;  // == pairs.size() when the end state is wrong
  std::string reason;
};

ValidationReport validate(const EmbeddedComplex& x, const CollapsingSequence& seq);
bool is_normalized(const CollapsingSequence& seq);

/// Moves all tet-tri pairs to the front while keeping the sequence valid.
/// Throws CannotReorder if the input is invalid or no repair is found.
CollapsingSequence normalize(const EmbeddedComplex& x, const CollapsingSequence& seq);

}  // namespace hodge
