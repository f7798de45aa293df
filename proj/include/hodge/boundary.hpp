#pragma once
// Homology correction P_Γ and the output-relative boundary projection Π̃_bd.

#include <Eigen/Dense>

#include "hodge/bases.hpp"
#include "hodge/graph_solver.hpp"
#include "hodge/harmonic.hpp"

namespace hodge {

/// P_Γ x = Γ M⁻¹ Pᵀ x with M = PᵀΓ.
class GammaCorrection {
 public:
  /// Throws SingularM when M is not invertible (M is integral).
  GammaCorrection(const Scope& k, const BasisSet& gamma, const BasisSet& p);

  /// Throws NotACycle unless ‖∂1 x‖ <= cycle_tol ‖x‖.
  Vecd apply(std::span<const double> x, double cycle_tol = 1e-8) const;
  Vecd apply_unchecked(std::span<const double> x) const;
  Vecd apply_transpose(std::span<const double> x) const;

  int beta() const { return static_cast<int>(gamma_.size()); }
  const Eigen::MatrixXd& pairing() const { return m_; }
  double p_max() const { return p_max_; }
  double gamma_max() const { return gamma_max_; }
  /// β^{(β+3)/2} (p_max γ_max)^{β+1}, as log10.
  double log10_norm_bound() const;

 private:
  const Scope* k_;
  std::vector<Vecd> gamma_, p_;
  Eigen::MatrixXd m_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_, lut_;
  double p_max_ = 0, gamma_max_ = 0;
};

struct BoundaryOptions {
  Mode mode = Mode::Practical;
  double delta = 0.0;         // practical: 0 picks δ from the measured amplification
  double amp_safety = 4.0;    // multiplies the power-iteration estimate of ‖A‖²
  int power_iters = 60;
  std::uint64_t seed = 99;
};

/// Π̃_bd(ε) = A (I - Π̃_cbd(δ) - Π̃_hr) Aᵀ with A = (I-P_Γ)(I-P_T).
class BoundaryProjector {
 public:
  BoundaryProjector(const Scope& k, const GraphProjector& k_graph, const HarmonicBasisApprox& hb,
                    const GammaCorrection& pg, const BoundaryOptions& opt = {});

  Vecd apply(double eps, std::span<const double> x) const;
  /// (I-P_Γ)(I-P_T) x and its transpose.
  Vecd correction(std::span<const double> x) const;
  Vecd correction_transpose(std::span<const double> x) const;

  /// δ handed to Π̃_cbd and required of Π̃_hr. Throws EpsilonUnderflow in theory mode.
  double delta_for(double eps) const;
  double log10_delta_for(double eps) const;
  /// ‖A‖² estimate (practical) or n1⁴(1 + ‖P_Γ‖ bound)² (theory), as log10.
  double log10_amplification() const;
  double amplification_estimate() const { return amp_est_; }
  const BoundaryOptions& options() const { return opt_; }

 private:
  const Scope* k_;
  const GraphProjector* kg_;
  const HarmonicBasisApprox* hb_;
  const GammaCorrection* pg_;
  BoundaryOptions opt_;
  double amp_est_ = 1.0;
};

struct HelperAudit {
  double identity_i = 0.0;   // ‖A Π_bd - Π_bd‖_max
  double identity_ii = 0.0;  // ‖Π_bd A - A‖_max / max(1, ‖A‖_max)
  double boundary_residual = 0.0;  // worst relative least-squares residual of A x outside im ∂2
  double pt_norm_sq = 0.0, pt_bound = 0.0;  // λmax((I-P_T)(I-P_T)ᵀ) vs n1²
  double pgamma_norm = 0.0, log10_pgamma_bound = 0.0;
  bool ok(double tol = 1e-9) const {
    return identity_i <= tol && identity_ii <= tol && boundary_residual <= tol && pt_norm_sq <= pt_bound &&
           (pgamma_norm == 0.0 || std::log10(pgamma_norm) <= log10_pgamma_bound + 1e-12);
  }
};

/// Dense audit of the two helper identities and the norm bounds.
HelperAudit helper_identities_audit(const Scope& k, const BoundaryProjector& bp, const GammaCorrection& pg,
                                    const SpanningTreeOp& tree, int samples, std::uint64_t seed,
                                    std::size_t cap = 2000);

}  // namespace hodge
