#pragma once
// Include, Fill and Squeeze operators and the cohomology operator C.

#include <vector>

#include "hodge/collapse.hpp"
#include "hodge/complex.hpp"
#include "hodge/embedding.hpp"
#include "hodge/linop.hpp"

namespace hodge {

/// Zero extension of a K 1-chain to X indexing.
Vecd include(const Scope& k, std::span<const double> x);
/// Transpose of include.
Vecd include_transpose(const Scope& k, std::span<const double> x);

/// Triangle-edge pairs of a normalized sequence, swept in collapse order.
class FillPlan {
 public:
  struct Step {
    int tri;
    int edge;
    double sign;  // coefficient of edge in ∂tri
  };

  /// Throws SequenceNotNormalized.
  FillPlan(const Scope& x, const CollapsingSequence& normalized);

  /// 1-chain of X -> 2-chain of X; ∂2 F γ = γ for cycles γ.
  Vecd apply(std::span<const double> gamma) const;
  Vecd apply_transpose(std::span<const double> z) const;

  const std::vector<Step>& steps() const { return steps_; }
  /// Edges of edge-vertex pairs: a spanning tree of the 1-skeleton of X.
  const std::vector<int>& tree_edges() const { return tree_edges_; }
  std::size_t n_edges() const { return n1_; }
  std::size_t n_tris() const { return n2_; }

 private:
  const EmbeddedComplex* cx_;
  std::size_t n1_ = 0, n2_ = 0;
  std::vector<Step> steps_;
  std::vector<int> tree_edges_;
};

class SqueezeOp {
 public:
  /// Throws OrderMismatch if the order does not remove exactly X∖T legally.
  SqueezeOp(const Scope& x, const Scope& t, std::vector<SqueezeStep> order);

  /// 2-chain of X -> 2-chain of T (local indices).
  Vecd apply(std::span<const double> x) const;
  /// Same, kept in X indexing, after the first `steps` moves only.
  Vecd apply_prefix(std::span<const double> x, std::size_t steps) const;
  Vecd apply_transpose(std::span<const double> t) const;

  const std::vector<SqueezeStep>& order() const { return order_; }
  const Scope& t_scope() const { return *t_; }

 private:
  const EmbeddedComplex* cx_;
  const Scope* t_;
  std::vector<SqueezeStep> order_;
  std::vector<double> sign_;  // coefficient of σ_i in ∂3 τ_i
};

/// C = Nᵀ Fᵀ Sᵀ Π Π S F N with Π keeping only T∖K triangles.
class CohomologyOperator {
 public:
  CohomologyOperator(const Scope& k, const FillPlan& fill, const SqueezeOp& squeeze);

  Vecd apply(std::span<const double> gamma_k) const;
  /// Π S F N as a map C1(K) -> C2(T); C = Aᵀ A.
  Vecd half(std::span<const double> gamma_k) const;
  Vecd half_transpose(std::span<const double> t2) const;

 private:
  const Scope* k_;
  const FillPlan* fill_;
  const SqueezeOp* squeeze_;
  std::vector<std::uint8_t> keep_;  // per T triangle: in T∖K
};

/// U = restrict_K ∘ S ∘ F ∘ N : C1(K) -> C2(K); ∂2[K] U y = y on im ∂2[K].
class UOperator {
 public:
  UOperator(const Scope& k, const FillPlan& fill, const SqueezeOp& squeeze);
  Vecd apply(std::span<const double> y) const;
  Vecd apply_transpose(std::span<const double> w) const;

 private:
  const Scope* k_;
  const FillPlan* fill_;
  const SqueezeOp* squeeze_;
  std::vector<int> t_to_k_;  // T-local triangle -> K-local triangle or -1
};

struct NormReport {
  double squeeze = 0, squeeze_bound = 0;
  double fill = 0, fill_bound = 0;
  double cohom = 0, cohom_bound = 0, alpha = 0;
  double lambda_min_x = 0;
  bool ok() const { return squeeze <= squeeze_bound && fill <= fill_bound && cohom <= cohom_bound; }
};

/// Power-iteration norms against the closed-form bounds; lambda_min_x is
/// the smallest nonzero eigenvalue of L1^up(X).
NormReport norm_estimates(const Scope& x, const Scope& k, const FillPlan& fill, const SqueezeOp& squeeze,
                          const CohomologyOperator& c, double lambda_min_x, int iters = 200);

}  // namespace hodge
