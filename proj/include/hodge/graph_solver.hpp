#pragma once
// Graph Laplacian machinery: incidence structure, spanning-tree operator
// P_T, an aggregation multigrid preconditioner, polynomial pseudoinverse
// approximations, and the projections Π̃_cbd, Π̃_cyc and the down solver.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hodge/complex.hpp"
#include "hodge/embedding.hpp"
#include "hodge/kernels.hpp"
#include "hodge/linop.hpp"

namespace hodge {

/// Directed multigraph; edge e has incidence -1 at tail, +1 at head
/// (self-loops have a zero column).
class Graph {
 public:
  Graph(int num_nodes, std::vector<std::array<int, 2>> edges);
  static Graph from_scope(const Scope& s);  // 1-skeleton, B = ∂1
  static Graph from_dual(const DualGraph& g);

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int tail(int e) const { return edges_[e][0]; }
  int head(int e) const { return edges_[e][1]; }
  const kernels::Csr& incidence() const { return b_; }
  const kernels::Csr& incidence_t() const { return bt_; }
  const kernels::Csr& laplacian() const { return l_; }
  const std::vector<int>& component() const { return comp_; }
  int num_components() const { return ncomp_; }

  Vecd boundary(std::span<const double> x) const { return kernels::spmv(b_, x); }
  Vecd coboundary(std::span<const double> phi) const { return kernels::spmv(bt_, phi); }
  Vecd laplacian_apply(std::span<const double> phi) const { return kernels::spmv(l_, phi); }
  /// Removes the per-component mean (projection onto im L).
  void project_out_kernel(std::span<double> phi) const;

 private:
  int n_;
  std::vector<std::array<int, 2>> edges_;
  kernels::Csr b_, bt_, l_;
  std::vector<int> comp_;
  std::vector<int> comp_size_;
  int ncomp_ = 0;
};

/// Rooted spanning forest with leaf-elimination order.
class SpanningTreeOp {
 public:
  /// BFS forest (roots: smallest node of each component).
  explicit SpanningTreeOp(const Graph& g);
  /// Given tree edges; throws InvalidInput unless they form a spanning forest.
  SpanningTreeOp(const Graph& g, const std::vector<int>& tree_edges);

  /// Unique tree-supported chain with the same boundary as x.
  Vecd apply(std::span<const double> x) const;
  Vecd apply_transpose(std::span<const double> z) const;
  /// Path from u to the root of its tree as (edge, sign) pairs: x - P_T x for a unit edge.
  Vecd fundamental_cycle(int edge) const;

  const std::vector<int>& tree_edges() const { return tree_edges_; }
  bool is_tree_edge(int e) const { return in_tree_[e] != 0; }

 private:
  void build(const std::vector<int>& tree_edges);
  const Graph* g_;
  std::vector<int> order_;        // BFS order, roots first
  std::vector<int> parent_;       // -1 for roots
  std::vector<int> parent_edge_;  // -1 for roots
  std::vector<double> up_sign_;   // incidence of v on its parent edge
  std::vector<int> tree_edges_;
  std::vector<std::uint8_t> in_tree_;
};

enum class Precond { None, Jacobi, Amg };

struct SddOptions {
  Precond precond = Precond::Amg;
  int max_iters = 2000;
  double tol_map = 1.0;
  int lanczos_steps = 60;
  double lower_safety = 0.5;  // multiplies the smallest Ritz value
  double upper_safety = 1.1;
  int coarse_size = 40;
  int smooth_sweeps = 2;
  bool smoothed_prolongator = true;
  std::uint64_t seed = 12345;
};

/// Aggregation V-cycle for a graph Laplacian (symmetric). Aggregates follow
/// strong couplings; rows of very high degree (void nodes of a dual graph)
/// stay singletons. The prolongator is either smoothed by one damped Jacobi
/// step of the hub-filtered operator or left piecewise constant.
class AmgHierarchy {
 public:
  AmgHierarchy(const kernels::Csr& a, int coarse_size, int sweeps, bool smoothed = true);
  Vecd vcycle(std::span<const double> b) const;
  int levels() const { return static_cast<int>(levels_.size()) + 1; }
  std::size_t coarse_dim() const { return static_cast<std::size_t>(coarse_pinv_.rows()); }
  /// (rows, nnz) per level, finest first, coarse level last.
  std::vector<std::pair<int, std::size_t>> level_stats() const;

 private:
  struct Level {
    kernels::Csr a;
    std::vector<double> dinv;
    double omega = 0.0;
    kernels::Csr p, r;
  };
  void vcycle_level(std::size_t l, std::span<const double> b, std::span<double> x) const;
  std::vector<Level> levels_;
  kernels::Csr coarse_a_;
  Eigen::MatrixXd coarse_pinv_;
  int sweeps_;
};

/// Approximate pseudoinverse of a graph Laplacian.
///
/// C_k is a fixed preconditioned Chebyshev polynomial; Z = 2C - CLC has
/// L^{1/2} Z L^{1/2} = I - r_k(M⁻¹L)² on im L, so Z ⪯ L⁺ always and
/// (1-η²) L⁺ ⪯ Z once |r_k| <= η on the preconditioned spectrum.
class SddSolver {
 public:
  SddSolver(std::shared_ptr<const Graph> g, const SddOptions& opt);

  /// Z b with relative accuracy eps: (1-eps) L⁺ ⪯ Z ⪯ L⁺.
  Vecd z_apply(std::span<const double> b, double eps) const;
  int degree_for(double eps) const;
  Vecd chebyshev(std::span<const double> b, int degree) const;
  Vecd precondition(std::span<const double> r) const;

  /// Residual-contract solve ‖Lx - b‖ <= tol ‖b‖ (b is projected onto im L).
  /// Throws SolveDiverged after max_iters.
  Vecd pcg(std::span<const double> b, double tol, int* iters = nullptr) const;

  double interval_lo() const { return lo_; }
  double interval_hi() const { return hi_; }
  double ritz_min() const { return ritz_min_; }
  double ritz_max() const { return ritz_max_; }
  const Graph& graph() const { return *g_; }
  const SddOptions& options() const { return opt_; }
  int amg_levels() const { return amg_ ? amg_->levels() : 0; }
  /// Smallest nonzero eigenvalue of L (unpreconditioned Lanczos), cached.
  double lambda_min_estimate() const;
  long long applications() const { return apps_; }

 private:
  void estimate_interval();
  std::shared_ptr<const Graph> g_;
  SddOptions opt_;
  std::unique_ptr<AmgHierarchy> amg_;
  std::vector<double> dinv_;
  double lo_ = 0, hi_ = 0, ritz_min_ = 0, ritz_max_ = 0;
  bool trivial_ = false;
  mutable double lam_min_ = -1;
  mutable long long apps_ = 0;
};

/// Π̃_cbd, Π̃_cyc and the down solver for one graph.
class GraphProjector {
 public:
  GraphProjector(std::shared_ptr<const Graph> g, const SddOptions& opt,
                 std::optional<std::vector<int>> tree_edges = std::nullopt);

  /// Bᵀ Z(eps) B: (1-eps)Π_cbd ⪯ Π̃ ⪯ Π_cbd.
  Vecd proj_cbd(double eps, std::span<const double> x) const;
  /// (1+δn₁²)⁻¹ (I-P_T)(I-Π̃_cbd(δ))(I-P_T)ᵀ with δ = eps/(2n₁²): (1-eps)Π_cyc ⪯ Π̃ ⪯ Π_cyc.
  Vecd proj_cyc(double eps, std::span<const double> x) const;
  /// s·Bᵀ Z(eps_z)² B with eps_z shrunk by sqrt of a guaranteed condition bound
  /// (λ₂ >= 4/n²); (1-eps)(BᵀB)⁺ ⪯ result ⪯ (BᵀB)⁺.
  Vecd down_solve(double eps, std::span<const double> b) const;

  const Graph& graph() const { return *g_; }
  const SpanningTreeOp& tree() const { return tree_; }
  const SddSolver& sdd() const { return sdd_; }

 private:
  std::shared_ptr<const Graph> g_;
  SddSolver sdd_;
  SpanningTreeOp tree_;
};

/// Extreme Ritz values of a symmetric PSD operator restricted to a
/// subspace, from a Lanczos run started at v0.
struct RitzRange {
  double lo = 0, hi = 0;
  int steps = 0;
};
/// With residual_filter, lo skips Ritz pairs whose residual estimate exceeds
/// the Ritz value (kernel noise amplified into the Krylov space).
/// Without full_reorth only the three-term recurrence is kept: O(n) memory,
/// and lost orthogonality shows up as repeated copies of converged values.
RitzRange lanczos_extremes(const ApplyFn& op, Vecd v0, int max_steps, double kernel_cut = 1e-8,
                           bool residual_filter = false, bool full_reorth = true);

}  // namespace hodge
