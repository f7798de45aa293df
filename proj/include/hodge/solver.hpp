#pragma once
// Up-Laplacian solver from the (BBᵀ)⁺ composition and the full 1-Laplacian solver on K.

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "hodge/boundary.hpp"
#include "hodge/chain_ops.hpp"
#include "hodge/collapse.hpp"
#include "hodge/embedding.hpp"

namespace hodge {

struct SpectralEstimates {
  double lambda_min_k = 0, lambda_max_k = 0;  // L1^up(K), nonzero spectrum
  double lambda_min_x = 0, lambda_max_x = 0;  // L1^up(X)
  double lambda_min_l2up_x = 0;               // L2^up(X)
  double lambda_max_bound = 0;                // 3 n2(K)
  int steps = 0;
  bool bound_ok() const { return lambda_max_k <= lambda_max_bound * (1 + 1e-12); }
};

/// Dense eigensolve up to dense_cap rows, otherwise Lanczos with full
/// reorthogonalization started inside the image. Throws IterationStalled.
/// The X estimates are skipped when with_x is false.
SpectralEstimates spectral_estimates(const Scope& k, const Scope& x, int steps, std::uint64_t seed,
                                     bool with_x = true, std::size_t dense_cap = 1500);
/// Extreme nonzero eigenvalues of ∂_d ∂_dᵀ on (d-1)-chains of s.
RitzRange up_laplacian_range(const Scope& s, int d, int steps, std::uint64_t seed, std::size_t dense_cap = 1500);

struct SolverOptions {
  double eps = 0.05;
  Mode mode = Mode::Practical;
  SddOptions sdd;
  SddOptions sdd_dual = [] {
    SddOptions o;
    o.smoothed_prolongator = true;
    return o;
  }();
  double hr_eps_prime = 1e-11;  // practical harmonic accuracy
  BoundaryOptions boundary;
  double kappa_safety = 2.0;
  bool beta0_fast_path = true;
  int lanczos_steps = 300;
  std::size_t spectral_dense_cap = 1500;
  bool spectral_x = false;  // λ̂(X) outside theory mode (audits)
  bool verify_h2 = true;
  std::size_t dense_cap = 2000;
  std::uint64_t seed = 1;
};

struct HodgeParts3 {
  Vecd bd, hr, cbd;
};

class SolverContext {
 public:
  static std::unique_ptr<SolverContext> prepare(ComplexPtr cx, const SolverOptions& opt);
  SolverContext(const SolverContext&) = delete;
  SolverContext& operator=(const SolverContext&) = delete;

  Vecd down_solve(double eps, std::span<const double> b) const;
  Vecd up_solve(double eps, std::span<const double> b) const;
  Vecd laplacian_solve(double eps, std::span<const double> b) const;
  /// Π̃ onto im ∂2ᵀ[K] (2-chains), through the dual graph of K.
  Vecd proj_ker_perp_d2(double eps, std::span<const double> w) const;
  /// One-sided Π̃ onto im ∂2[K] used inside up_solve.
  Vecd proj_im_d2(double eps, std::span<const double> x) const;

  Vecd proj_bd(double eps, std::span<const double> x) const { return bp_->apply(eps, x); }
  Vecd proj_cbd(double eps, std::span<const double> x) const { return k_proj_->proj_cbd(eps, x); }
  Vecd proj_cyc(double eps, std::span<const double> x) const { return k_proj_->proj_cyc(eps, x); }
  Vecd proj_hr(std::span<const double> x) const { return hodge::proj_hr(*hb_, x); }
  HodgeParts3 hodge(double eps, std::span<const double> x) const;

  /// ε′ = ε / (3κ̂ + 1) with κ̂ = safety · λ̂max/λ̂min.
  double eps_prime(double eps) const;
  double kappa_hat() const { return kappa_; }
  bool uses_fast_path() const { return fast_path_; }

  const SolverOptions& options() const { return opt_; }
  const EmbeddedComplex& complex() const { return *cx_; }
  const Scope& x() const { return x_; }
  const Scope& k() const { return k_; }
  const TConstruction& t() const { return *t_; }
  const FillPlan& fill() const { return *fill_; }
  const SqueezeOp& squeeze() const { return *squeeze_; }
  const CohomologyOperator& cohomology_op() const { return *c_; }
  const UOperator& u() const { return *u_; }
  const GraphProjector& k_graph() const { return *k_proj_; }
  const GraphProjector& k_dual() const { return *dual_proj_; }
  const BasisSet& homology() const { return gamma_; }
  const BasisSet& cohomology() const { return p_; }
  const HarmonicBasisApprox& harmonic() const { return *hb_; }
  const GammaCorrection& gamma_correction() const { return *pg_; }
  const BoundaryProjector& boundary() const { return *bp_; }
  const SpectralEstimates& spectral() const { return spec_; }
  int beta() const { return static_cast<int>(gamma_.size()); }
  const std::map<std::string, double>& timings() const { return timings_; }

 private:
  SolverContext(ComplexPtr cx, const SolverOptions& opt);
  ComplexPtr cx_;
  SolverOptions opt_;
  Scope x_, k_;
  std::optional<TConstruction> t_;
  std::optional<FillPlan> fill_;
  std::optional<SqueezeOp> squeeze_;
  std::optional<CohomologyOperator> c_;
  std::optional<UOperator> u_;
  std::optional<GraphProjector> k_proj_, dual_proj_;
  BasisSet gamma_, p_;
  std::optional<GammaCorrection> pg_;
  std::optional<HarmonicBasisApprox> hb_;
  std::optional<BoundaryProjector> bp_;
  SpectralEstimates spec_;
  double kappa_ = 1.0;
  bool fast_path_ = false;
  std::map<std::string, double> timings_;
};

}  // namespace hodge
