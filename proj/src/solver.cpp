#include "hodge/solver.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Dense>

#include "hodge/error.hpp"

namespace hodge {

RitzRange up_laplacian_range(const Scope& s, int d, int steps, std::uint64_t seed, std::size_t dense_cap) {
  const std::size_t nd = s.count(d);
  if (nd == 0) return {};
  const auto& bd = s.boundary(d);
  if (s.count(d - 1) <= dense_cap) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s.count(d - 1)), static_cast<Eigen::Index>(nd));
    const auto& m = bd.matrix();
    for (int i = 0; i < m.rows; ++i)
      for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) b(i, m.col[k]) = m.val[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b * b.transpose(), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    RitzRange r;
    r.hi = ev(ev.size() - 1);
    r.lo = r.hi;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > 1e-9 * r.hi) {
        r.lo = ev(i);
        break;
      }
    r.steps = 0;
    return r;
  }
  Vecd v = bd.apply(random_vector(nd, seed));
  auto op = [&](std::span<const double> y) { return bd.apply(bd.apply_transpose(y)); };
  RitzRange r = lanczos_extremes(op, v, steps, 1e-10, true, false);
  if (r.steps == 0 || !(r.hi > 0)) throw Error(ErrorCode::IterationStalled, "Lanczos made no progress");
  return r;
}

SpectralEstimates spectral_estimates(const Scope& k, const Scope& x, int steps, std::uint64_t seed,
                                     bool with_x, std::size_t dense_cap) {
  SpectralEstimates s;
  s.lambda_max_bound = 3.0 * static_cast<double>(k.count(2));
  if (k.count(2) > 0) {
    auto r = up_laplacian_range(k, 2, steps, seed, dense_cap);
    s.lambda_min_k = r.lo;
    s.lambda_max_k = r.hi;
    s.steps = r.steps;
  }
  if (with_x && x.count(2) > 0) {
    auto r = up_laplacian_range(x, 2, steps, seed + 1, dense_cap);
    s.lambda_min_x = r.lo;
    s.lambda_max_x = r.hi;
  }
  if (with_x && x.count(3) > 0) s.lambda_min_l2up_x = up_laplacian_range(x, 3, steps, seed + 2, dense_cap).lo;
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

SolverContext::SolverContext(ComplexPtr cx, const SolverOptions& opt)
    : cx_(cx), opt_(opt), x_(Scope::full(cx)), k_(Scope::subcomplex_K(cx)) {}

std::unique_ptr<SolverContext> SolverContext::prepare(ComplexPtr cx, const SolverOptions& opt) {
  if (!(opt.eps > 0 && opt.eps < 1)) throw Error(ErrorCode::InvalidParams, "epsilon must lie in (0,1)");
  std::unique_ptr<SolverContext> s(new SolverContext(cx, opt));
  auto& tm = s->timings_;
  auto t0 = Clock::now();
  auto dual_x = build_dual_graph(s->x_);
  BuildTOptions bto;
  bto.verify_h2 = opt.verify_h2;
  bto.dense_cap = opt.dense_cap;
  s->t_.emplace(build_T(s->x_, dual_x, bto));
  auto seq = normalize(*cx, CollapsingSequence::from_complex(*cx));
  s->fill_.emplace(s->x_, seq);
  s->squeeze_.emplace(s->x_, s->t_->T, s->t_->order);
  s->c_.emplace(s->k_, *s->fill_, *s->squeeze_);
  s->u_.emplace(s->k_, *s->fill_, *s->squeeze_);
  tm["collapse_ops"] = since(t0);

  t0 = Clock::now();
  auto kg = std::make_shared<const Graph>(Graph::from_scope(s->k_));
  s->k_proj_.emplace(kg, opt.sdd);
  auto dual_k = build_dual_graph(s->k_);
  if (dual_k.edges.size() != s->k_.count(2)) throw Error(ErrorCode::InvalidInput, "dual graph of K lost triangles");
  for (std::size_t j = 0; j < dual_k.edges.size(); ++j)
    if (dual_k.edges[j].triangle != s->k_.to_global(2, static_cast<int>(j)))
      throw Error(ErrorCode::InvalidInput, "dual graph edge order differs from K");
  s->dual_proj_.emplace(std::make_shared<const Graph>(Graph::from_dual(dual_k)), opt.sdd_dual);
  tm["graph_solvers"] = since(t0);

  t0 = Clock::now();
  s->spec_ = spectral_estimates(s->k_, s->x_, opt.lanczos_steps, opt.seed, opt.mode == Mode::Theory || opt.spectral_x,
                                opt.spectral_dense_cap);
  if (s->spec_.lambda_min_k > 0)
    s->kappa_ = std::max(1.0, opt.kappa_safety * s->spec_.lambda_max_k / s->spec_.lambda_min_k);
  tm["spectral"] = since(t0);

  t0 = Clock::now();
  s->gamma_ = homology_basis(s->k_, s->k_proj_->tree().tree_edges());
  s->p_ = cohomology_basis(*s->c_, s->gamma_);
  s->gamma_.role = BasisRole::Homology;
  s->pg_.emplace(s->k_, s->gamma_, s->p_);
  tm["bases"] = since(t0);

  t0 = Clock::now();
  s->hb_.emplace();
  BoundaryOptions bo = opt.boundary;
  bo.mode = opt.mode;
  s->bp_.emplace(s->k_, *s->k_proj_, *s->hb_, *s->pg_, bo);
  HarmonicOptions ho;
  ho.mode = opt.mode;
  ho.eps_prime = opt.hr_eps_prime;
  ho.lambda_min_x = s->spec_.lambda_min_x;
  ho.n1_x = static_cast<double>(s->x_.count(1));
  ho.n2_x = static_cast<double>(s->x_.count(2));
  double hr_target = opt.hr_eps_prime;
  if (opt.mode == Mode::Theory && s->beta() > 0)
    hr_target = s->bp_->delta_for(0.5 * s->eps_prime(opt.eps)) / (2.0 * s->beta());
  *s->hb_ = harmonic_basis(*s->k_proj_, s->p_, hr_target, ho);
  s->fast_path_ = opt.beta0_fast_path && s->beta() == 0;
  tm["harmonic"] = since(t0);
  return s;
}

double SolverContext::eps_prime(double eps) const { return eps / (3.0 * kappa_ + 1.0); }

Vecd SolverContext::proj_ker_perp_d2(double eps, std::span<const double> w) const {
  return dual_proj_->proj_cyc(eps, w);
}

Vecd SolverContext::proj_im_d2(double eps, std::span<const double> x) const {
  if (fast_path_) return k_proj_->proj_cyc(eps, x);
  Vecd y = bp_->apply(0.5 * eps, x);
  kernels::scale(1.0 / (1.0 + 0.5 * eps), y);
  return y;
}

Vecd SolverContext::down_solve(double eps, std::span<const double> b) const { return k_proj_->down_solve(eps, b); }

Vecd SolverContext::up_solve(double eps, std::span<const double> b) const {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::InvalidParams, "epsilon must lie in (0,1)");
  if (k_.count(2) == 0) return Vecd(b.size(), 0.0);
  const double ep = eps_prime(eps);
  Vecd y = proj_im_d2(ep, b);
  Vecd w = u_->apply(y);
  w = proj_ker_perp_d2(ep, w);
  Vecd z = u_->apply_transpose(w);
  Vecd out = proj_im_d2(ep, z);
  kernels::scale(1.0 / (1.0 + kappa_ * ep), out);
  return out;
}

Vecd SolverContext::laplacian_solve(double eps, std::span<const double> b) const {
  Vecd d = down_solve(eps, b);
  Vecd u = up_solve(eps, b);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += u[i];
  return d;
}

HodgeParts3 SolverContext::hodge(double eps, std::span<const double> x) const {
  return {proj_bd(eps, x), proj_hr(x), proj_cbd(eps, x)};
}

}  // namespace hodge
