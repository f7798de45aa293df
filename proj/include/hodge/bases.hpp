#pragma once
// Homology and cohomology bases of K, witnesses, and δ-independence
// diagnostics.

#include <optional>
#include <vector>

#include "hodge/chain_ops.hpp"
#include "hodge/complex.hpp"
#include "hodge/linop.hpp"

namespace hodge {

enum class BasisRole { Homology, Cohomology, Harmonic, OrthonormalHarmonic };
std::string to_string(BasisRole r);

struct BasisSet {
  BasisRole role = BasisRole::Homology;
  std::vector<Vecd> chains;  // K-local 1-chains
  std::vector<double> norms;
  double max_norm = 0.0;  // p_max or γ_max
  std::vector<int> generators;  // homology: the non-tree edge of each cycle

  std::size_t size() const { return chains.size(); }
  void refresh_norms();
};

/// Fundamental cycles of a BFS tree of the 1-skeleton, one per non-tree edge
/// left free after reducing the triangle boundaries (peeling, then Z2
/// elimination on what remains). Entries are in {-1, 0, +1}.
BasisSet homology_basis(const Scope& k);
/// Same, against a given spanning tree (K-local edge indices).
BasisSet homology_basis(const Scope& k, const std::vector<int>& tree_edges);

/// p_i = C γ_i, rounded to integers (C is integral on integral input).
BasisSet cohomology_basis(const CohomologyOperator& c, const BasisSet& homology);

/// Least-squares witness: w·v[idx] = 1, w·v[j] = 0 otherwise, minimal norm.
/// Throws DependentInput.
Vecd witness(std::size_t idx, const std::vector<Vecd>& v);

/// Distance of each v_i to the span of the others (= 1/‖w_i‖ for the
/// minimal witness). Throws DependentInput.
std::vector<double> span_distances(const std::vector<Vecd>& v);

struct DeltaReport {
  int beta = 0;
  double n1 = 0, n2_x = 0, n1_x = 0;
  double p_max = 0;
  double bound = 1.0;  // 1/(√n1 p_max)^β
  double min_h_norm = 0.0;
  double delta_measured = 1.0;
  double sigma_min = 0.0;
  bool norm_ok = true, delta_ok = true;
  // corollary formula (λ/(α n1³ n2⁴))^β with both eigenvalue readings
  double alpha = 0.0;
  double lambda_l1up_x = 0.0, lambda_l2up_x = 0.0;
  double delta_formula_l1 = 0.0, delta_formula_l2 = 0.0;
  bool ok() const { return norm_ok && delta_ok; }
};

/// Oracle-exact harmonic parts of P; throws TooLarge above the dense cap.
/// Eigenvalues ≤ 0 skip the formula evaluation.
DeltaReport delta_independence_report(const BasisSet& p, const Scope& k, const Scope& x, double lambda_l1up_x,
                                      double lambda_l2up_x, std::size_t cap = 2000);

struct DetBoundReport {
  int trials = 0, violations = 0;
  double worst_ratio = 0.0;  // max |det B| / Π‖p_i‖₁
};
/// Random square stackings of ∂1 row blocks (totally unimodular) with integer rows.
DetBoundReport det_bound_check(const Scope& s, int trials, std::uint64_t seed, int max_n = 8, int max_k = 3);

}  // namespace hodge
