#include "hodge/boundary.hpp"

#include <cmath>
#include <random>

#include "hodge/error.hpp"
#include "hodge/oracle.hpp"

namespace hodge {

GammaCorrection::GammaCorrection(const Scope& k, const BasisSet& gamma, const BasisSet& p)
    : k_(&k), gamma_(gamma.chains), p_(p.chains) {
  if (gamma_.size() != p_.size()) throw Error(ErrorCode::InvalidInput, "basis sizes differ");
  const int b = beta();
  m_.resize(b, b);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) m_(i, j) = kernels::dot(p_[i], gamma_[j]);
  if (b > 0) {
    lu_.compute(m_);
    lut_.compute(m_.transpose());
    if (!lu_.isInvertible() || std::abs(m_.determinant()) < 0.5)
      throw Error(ErrorCode::SingularM, "pairing matrix is singular");
  }
  for (const auto& g : gamma_) gamma_max_ = std::max(gamma_max_, kernels::norm2(g));
  for (const auto& q : p_) p_max_ = std::max(p_max_, kernels::norm2(q));
}

Vecd GammaCorrection::apply_unchecked(std::span<const double> x) const {
  Vecd out(x.size(), 0.0);
  if (beta() == 0) return out;
  Eigen::VectorXd r(beta());
  for (int i = 0; i < beta(); ++i) r(i) = kernels::dot(p_[i], x);
  Eigen::VectorXd c = lu_.solve(r);
  for (int j = 0; j < beta(); ++j) kernels::axpy(c(j), gamma_[j], out);
  return out;
}

Vecd GammaCorrection::apply(std::span<const double> x, double cycle_tol) const {
  const double nx = kernels::norm2(x);
  const double nb = kernels::norm2(k_->boundary(1).apply(x));
  if (nb > cycle_tol * nx) throw Error(ErrorCode::NotACycle, "input has boundary norm " + std::to_string(nb));
  return apply_unchecked(x);
}

Vecd GammaCorrection::apply_transpose(std::span<const double> x) const {
  Vecd out(x.size(), 0.0);
  if (beta() == 0) return out;
  Eigen::VectorXd r(beta());
  for (int j = 0; j < beta(); ++j) r(j) = kernels::dot(gamma_[j], x);
  // (Γ M⁻¹ Pᵀ)ᵀ = P M⁻ᵀ Γᵀ
  Eigen::VectorXd c = lut_.solve(r);
  for (int i = 0; i < beta(); ++i) kernels::axpy(c(i), p_[i], out);
  return out;
}

double GammaCorrection::log10_norm_bound() const {
  const int b = beta();
  if (b == 0) return -INFINITY;
  return 0.5 * (b + 3) * std::log10(b) + (b + 1) * std::log10(p_max_ * gamma_max_);
}

BoundaryProjector::BoundaryProjector(const Scope& k, const GraphProjector& k_graph, const HarmonicBasisApprox& hb,
                                     const GammaCorrection& pg, const BoundaryOptions& opt)
    : k_(&k), kg_(&k_graph), hb_(&hb), pg_(&pg), opt_(opt) {
  if (opt_.mode == Mode::Practical && opt_.delta <= 0) {
    const int n1 = static_cast<int>(k.count(1));
    auto aat = [&](std::span<const double> v) { return correction(correction_transpose(v)); };
    amp_est_ = n1 > 0 ? power_max_eig(n1, aat, opt_.power_iters, opt_.seed) : 1.0;
  }
}

Vecd BoundaryProjector::correction(std::span<const double> x) const {
  Vecd y(x.begin(), x.end());
  Vecd t = kg_->tree().apply(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= t[i];
  Vecd g = pg_->apply_unchecked(y);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= g[i];
  return y;
}

Vecd BoundaryProjector::correction_transpose(std::span<const double> x) const {
  Vecd y(x.begin(), x.end());
  Vecd g = pg_->apply_transpose(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= g[i];
  Vecd t = kg_->tree().apply_transpose(y);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= t[i];
  return y;
}

double BoundaryProjector::log10_amplification() const {
  if (opt_.mode == Mode::Theory) {
    const double n1 = static_cast<double>(k_->count(1));
    const double lb = pg_->log10_norm_bound();
    // log10(1 + 10^lb)
    const double one_plus = lb > 15 ? lb : std::log10(1.0 + std::pow(10.0, lb));
    return 4 * std::log10(std::max(1.0, n1)) + 2 * one_plus;
  }
  return std::log10(std::max(1.0, opt_.amp_safety * amp_est_));
}

double BoundaryProjector::log10_delta_for(double eps) const {
  if (opt_.mode == Mode::Practical && opt_.delta > 0) return std::log10(opt_.delta);
  return std::log10(eps / 2.0) - log10_amplification();
}

double BoundaryProjector::delta_for(double eps) const {
  const double l = log10_delta_for(eps);
  if (l < -300) throw Error(ErrorCode::EpsilonUnderflow, "boundary delta = 1e" + std::to_string(static_cast<long long>(l)));
  return std::pow(10.0, l);
}

Vecd BoundaryProjector::apply(double eps, std::span<const double> x) const {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::InvalidParams, "epsilon must lie in (0,1)");
  const double delta = std::min(delta_for(eps), 0.5);
  Vecd y = correction_transpose(x);
  Vecd c = kg_->proj_cbd(delta, y);
  Vecd h = proj_hr(*hb_, y);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c[i] + h[i];
  return correction(y);
}

HelperAudit helper_identities_audit(const Scope& k, const BoundaryProjector& bp, const GammaCorrection& pg,
                                    const SpanningTreeOp& tree, int samples, std::uint64_t seed, std::size_t cap) {
  HelperAudit rep;
  oracle::HodgeOracle o(k, cap);
  const int n1 = static_cast<int>(k.count(1));
  using oracle::Mat;
  Mat a = oracle::materialize(n1, [&](std::span<const double> x) { return bp.correction(x); });
  rep.identity_i = (a * o.P_bd - o.P_bd).cwiseAbs().maxCoeff();
  rep.identity_ii = (o.P_bd * a - a).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-5, 5);
  for (int s = 0; s < samples; ++s) {
    oracle::Vec x(n1);
    for (int i = 0; i < n1; ++i) x(i) = d(rng);
    oracle::Vec ax = a * x;
    if (ax.norm() == 0) continue;
    rep.boundary_residual = std::max(rep.boundary_residual, (ax - o.P_bd * ax).norm() / ax.norm());
  }
  Mat p = oracle::materialize(n1, [&](std::span<const double> x) { return tree.apply(x); });
  Mat q = Mat::Identity(n1, n1) - p;
  rep.pt_norm_sq = oracle::max_eig(q * q.transpose());
  rep.pt_bound = double(n1) * n1;
  if (pg.beta() > 0) {
    Mat g = oracle::materialize(n1, [&](std::span<const double> x) { return pg.apply_unchecked(x); });
    rep.pgamma_norm = oracle::spectral_norm(g);
    rep.log10_pgamma_bound = pg.log10_norm_bound();
  }
  return rep;
}

}  // namespace hodge
