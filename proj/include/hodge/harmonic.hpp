#pragma once
// Approximate orthonormal harmonic basis and the projection Π̃_hr.

#include <cstdint>
#include <vector>

#include "hodge/bases.hpp"
#include "hodge/graph_solver.hpp"

namespace hodge {

enum class Mode { Practical, Theory };
std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// Classical Gram-Schmidt with one re-orthogonalization pass.
/// Throws RankDeficient when a pivot norm drops to pivot_tol or below.
std::vector<Vecd> gram_schmidt(const std::vector<Vecd>& v, double pivot_tol = 1e-10);

struct HarmonicBasisApprox {
  std::vector<Vecd> g;
  Mode mode = Mode::Practical;
  double eps = 0.0;        // requested ‖g_i - g̃_i‖
  double eps_prime = 0.0;  // accuracy handed to Π̃_cyc
  double delta = 0.0;      // independence level assumed (theory mode)
  double log10_eps_prime = 0.0;
  std::size_t size() const { return g.size(); }
};

struct HarmonicOptions {
  Mode mode = Mode::Practical;
  double eps_prime = 1e-11;  // practical mode
  double lambda_min_x = 0.0;  // theory mode: smallest nonzero eig of L1^up(X)
  double n1_x = 0.0, n2_x = 0.0;
};

/// h̃_i = Π̃_cyc(ε′) p_i, normalized, orthonormalized. Theory mode uses
/// ε′ = (δ/8β)^{β+1} ε with δ = (λ/(α n1³ n2⁴))^β and throws
/// EpsilonUnderflow when ε′ < 1e-300.
HarmonicBasisApprox harmonic_basis(const GraphProjector& k_graph, const BasisSet& cohomology, double eps,
                                   const HarmonicOptions& opt);

/// Σ g̃_i (g̃_i · x).
Vecd proj_hr(const HarmonicBasisApprox& hb, std::span<const double> x);

struct GsAuditReport {
  int trials = 0;
  int gs_violations = 0;    // ‖g_i - g̃_i‖ > (8β/δ)^β ε
  int proj_violations = 0;  // ‖Π - Π̃‖ >= 2β (8β/δ)^β ε
  int skipped = 0;          // ε outside the lemma's range
  double worst_gs_ratio = 0.0, worst_proj_ratio = 0.0;
  bool ok() const { return gs_violations == 0 && proj_violations == 0; }
};

/// Random δ-independent unit sets in dimension dim, perturbed by < ε.
GsAuditReport gs_perturbation_audit(int beta, double delta, double eps, int trials, std::uint64_t seed, int dim = 12);

}  // namespace hodge
