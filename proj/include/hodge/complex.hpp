#pragma once
// Simplicial complexes in R^3, chains and signed boundary operators.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hodge/kernels.hpp"

namespace hodge {

using VertexId = std::int64_t;
using Point3 = std::array<double, 3>;

enum class ScopeTag { X, K, T };
std::string to_string(ScopeTag s);
ScopeTag scope_from_string(const std::string& s);

/// Reference to a simplex of X by (dimension, dense index).
struct SimplexRef {
  int dim = 0;
  int index = 0;
  bool operator==(const SimplexRef&) const = default;
};

/// Unvalidated description as read from a file or produced by a generator.
struct RawComplex {
  std::vector<std::pair<VertexId, Point3>> vertices;
  // simplices[d] for d = 1..3; simplices[0] is ignored (vertices define it)
  std::array<std::vector<std::vector<VertexId>>, 4> simplices;
  std::vector<SimplexRef> in_K;
  std::vector<std::pair<SimplexRef, SimplexRef>> collapses;  // (coface, face)
  std::optional<std::vector<std::array<VertexId, 4>>> ambient_tets;
};

struct ArrayHash {
  std::size_t operator()(const std::array<int, 4>& a) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (int v : a) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

class EmbeddedComplex {
 public:
  /// Validates and indexes a raw description.
  /// Throws MissingFace, DuplicateSimplex, NonSortedTuple, KNotFaceClosed.
  static std::shared_ptr<const EmbeddedComplex> build(const RawComplex& raw);

  std::size_t count(int d) const { return counts_[d]; }
  std::size_t total() const { return counts_[0] + counts_[1] + counts_[2] + counts_[3]; }
  int top_dim() const;

  VertexId vertex_id(int v) const { return ids_[v]; }
  const Point3& position(int v) const { return pos_[v]; }

  /// Vertex indices of simplex (d,i), ordered by increasing vertex id.
  std::span<const int> verts(int d, int i) const {
    return {verts_[d].data() + static_cast<std::size_t>(i) * (d + 1), static_cast<std::size_t>(d + 1)};
  }
  /// Facets of (d,i), d >= 1. Facet j omits vertex j and carries sign (-1)^j.
  std::span<const int> faces(int d, int i) const {
    return {faces_[d].data() + static_cast<std::size_t>(i) * (d + 1), static_cast<std::size_t>(d + 1)};
  }
  /// Cofaces of (d,i) in X (indices of (d+1)-simplices), d <= 2.
  std::span<const int> cofaces(int d, int i) const {
    return {cof_idx_[d].data() + cof_ptr_[d][i], static_cast<std::size_t>(cof_ptr_[d][i + 1] - cof_ptr_[d][i])};
  }
  /// Index of the simplex with the given vertex indices (any order), or -1.
  int find(std::span<const int> vertex_indices) const;
  int find_ids(std::span<const VertexId> ids) const;
  int vertex_index(VertexId id) const;

  bool in_K(int d, int i) const { return k_[d][i] != 0; }
  const std::vector<std::uint8_t>& k_flags(int d) const { return k_[d]; }
  std::size_t k_count(int d) const;

  bool has_ambient() const { return ambient_.has_value(); }
  /// Ambient tetrahedra as vertex indices ordered by id.
  const std::vector<std::array<int, 4>>& ambient() const { return *ambient_; }

  const std::vector<std::pair<SimplexRef, SimplexRef>>& collapses() const { return collapses_; }

  /// Round trip back to a raw description.
  RawComplex to_raw() const;

 private:
  std::array<std::size_t, 4> counts_{};
  std::vector<VertexId> ids_;
  std::vector<Point3> pos_;
  std::unordered_map<VertexId, int> id_to_index_;
  std::array<std::vector<int>, 4> verts_;
  std::array<std::vector<int>, 4> faces_;
  std::array<std::vector<int>, 3> cof_ptr_;
  std::array<std::vector<int>, 3> cof_idx_;
  std::array<std::unordered_map<std::array<int, 4>, int, ArrayHash>, 4> lookup_;
  std::array<std::vector<std::uint8_t>, 4> k_;
  std::optional<std::vector<std::array<int, 4>>> ambient_;
  std::vector<std::pair<SimplexRef, SimplexRef>> collapses_;
};

using ComplexPtr = std::shared_ptr<const EmbeddedComplex>;

/// A real vector over the d-simplices of a scope.
struct Chain {
  int dim = 0;
  ScopeTag scope = ScopeTag::X;
  std::vector<double> values;
};

/// Signed incidence matrix of ∂_d restricted to a face-closed scope.
class BoundaryOp {
 public:
  BoundaryOp() = default;
  BoundaryOp(int d, ScopeTag scope, kernels::Csr mat);

  int dim() const { return dim_; }
  ScopeTag scope() const { return scope_; }
  int rows() const { return fwd_.rows; }
  int cols() const { return fwd_.cols; }
  const kernels::Csr& matrix() const { return fwd_; }
  const kernels::Csr& matrix_t() const { return adj_; }

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_transpose(std::span<const double> y) const;
  Chain apply(const Chain& x) const;
  Chain apply_transpose(const Chain& y) const;

 private:
  int dim_ = 1;
  ScopeTag scope_ = ScopeTag::X;
  kernels::Csr fwd_;
  kernels::Csr adj_;
};

/// A face-closed subset of X (X itself, K, or T) with local dense indices
/// (ordered as in X) and boundary operators.
class Scope {
 public:
  using Membership = std::array<std::vector<std::uint8_t>, 4>;

  /// Throws ScopeMismatch if the membership is not face-closed.
  Scope(ComplexPtr cx, ScopeTag tag, Membership member);
  static Scope full(ComplexPtr cx);
  static Scope subcomplex_K(ComplexPtr cx);

  ScopeTag tag() const { return tag_; }
  const EmbeddedComplex& complex() const { return *cx_; }
  const ComplexPtr& complex_ptr() const { return cx_; }

  std::size_t count(int d) const { return l2g_[d].size(); }
  int to_global(int d, int local) const { return l2g_[d][local]; }
  /// -1 when the simplex is not in the scope.
  int to_local(int d, int global) const { return g2l_[d][global]; }
  bool contains(int d, int global) const { return g2l_[d][global] >= 0; }
  const std::vector<int>& globals(int d) const { return l2g_[d]; }
  const Membership& membership() const { return member_; }

  /// ∂_d for d = 1..3; throws DimOutOfRange otherwise.
  const BoundaryOp& boundary(int d) const;

  /// Zero-extends a scope chain to X indexing / restricts an X chain.
  std::vector<double> extend(int d, std::span<const double> local) const;
  std::vector<double> restrict(int d, std::span<const double> global) const;

  Chain zero_chain(int d) const { return Chain{d, tag_, std::vector<double>(count(d), 0.0)}; }

 private:
  ComplexPtr cx_;
  ScopeTag tag_;
  Membership member_;
  std::array<std::vector<int>, 4> l2g_;
  std::array<std::vector<int>, 4> g2l_;
  std::array<BoundaryOp, 3> bd_;
};

enum class Laplacian { L1, L1Up, L1Down, L0 };

/// Matrix-free Laplacian product; throws ScopeMismatch on dim/scope mismatch.
Chain laplacian_apply(const Scope& s, Laplacian which, const Chain& x);
std::vector<double> laplacian_apply(const Scope& s, Laplacian which, std::span<const double> x);

}  // namespace hodge
