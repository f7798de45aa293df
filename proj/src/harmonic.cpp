#include "hodge/harmonic.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "hodge/error.hpp"
#include "hodge/oracle.hpp"

namespace hodge {

std::string to_string(Mode m) { return m == Mode::Theory ? "theory" : "practical"; }

Mode mode_from_string(const std::string& s) {
  if (s == "theory") return Mode::Theory;
  if (s == "practical") return Mode::Practical;
  throw Error(ErrorCode::InvalidParams, "unknown mode '" + s + "'");
}

std::vector<Vecd> gram_schmidt(const std::vector<Vecd>& v, double pivot_tol) {
  std::vector<Vecd> g;
  for (const auto& vk : v) {
    Vecd u = vk;
    const double nv = kernels::norm2(vk);
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<double> c(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) c[i] = kernels::dot(u, g[i]);
      for (std::size_t i = 0; i < g.size(); ++i) kernels::axpy(-c[i], g[i], u);
    }
    const double nu = kernels::norm2(u);
    if (nu <= pivot_tol * std::max(1.0, nv))
      throw Error(ErrorCode::RankDeficient, "Gram-Schmidt pivot " + std::to_string(nu) + " below tolerance");
    kernels::scale(1.0 / nu, u);
    g.push_back(std::move(u));
  }
  return g;
}

HarmonicBasisApprox harmonic_basis(const GraphProjector& k_graph, const BasisSet& cohomology, double eps,
                                   const HarmonicOptions& opt) {
  HarmonicBasisApprox hb;
  hb.mode = opt.mode;
  hb.eps = eps;
  const int beta = static_cast<int>(cohomology.size());
  if (beta == 0) return hb;
  if (opt.mode == Mode::Theory) {
    if (!(opt.lambda_min_x > 0)) throw Error(ErrorCode::InvalidParams, "theory mode needs lambda_min(X) > 0");
    const double n1 = opt.n1_x, n2 = opt.n2_x;
    const double alpha = 16.0 * (n1 + 1) * (n1 + 1) / std::max(1.0, n1 * n1);
    const double log10_delta = beta * (std::log10(opt.lambda_min_x) - std::log10(alpha) - 3 * std::log10(n1) -
                                       4 * std::log10(n2));
    hb.delta = std::pow(10.0, log10_delta);
    hb.log10_eps_prime = (beta + 1) * (log10_delta - std::log10(8.0 * beta)) + std::log10(eps);
    if (hb.log10_eps_prime < -300)
      throw Error(ErrorCode::EpsilonUnderflow,
                  "theory-mode eps' = 1e" + std::to_string(static_cast<long long>(hb.log10_eps_prime)));
    hb.eps_prime = std::pow(10.0, hb.log10_eps_prime);
  } else {
    hb.eps_prime = opt.eps_prime;
    hb.log10_eps_prime = std::log10(opt.eps_prime);
  }
  const double e = std::min(hb.eps_prime, 0.5);
  std::vector<Vecd> n;
  for (const auto& p : cohomology.chains) {
    Vecd h = k_graph.proj_cyc(e, p);
    const double nh = kernels::norm2(h);
    if (nh == 0.0) throw Error(ErrorCode::RankDeficient, "cohomology vector has no harmonic part");
    kernels::scale(1.0 / nh, h);
    n.push_back(std::move(h));
  }
  hb.g = gram_schmidt(n);
  return hb;
}

Vecd proj_hr(const HarmonicBasisApprox& hb, std::span<const double> x) {
  Vecd out(x.size(), 0.0);
  for (const auto& g : hb.g) kernels::axpy(kernels::dot(g, x), g, out);
  return out;
}

namespace {

// Plain classical Gram-Schmidt as in the lemma (no re-orthogonalization).
std::vector<Eigen::VectorXd> plain_gs(const std::vector<Eigen::VectorXd>& v) {
  std::vector<Eigen::VectorXd> g;
  for (const auto& vk : v) {
    Eigen::VectorXd u = vk;
    for (const auto& gi : g) u -= vk.dot(gi) * gi;
    g.push_back(u / u.norm());
  }
  return g;
}

double min_span_distance(const std::vector<Eigen::VectorXd>& v) {
  std::vector<Vecd> s;
  for (const auto& x : v) s.push_back(oracle::to_std(x));
  auto d = span_distances(s);
  return *std::min_element(d.begin(), d.end());
}

}  // namespace

GsAuditReport gs_perturbation_audit(int beta, double delta, double eps, int trials, std::uint64_t seed, int dim) {
  GsAuditReport rep;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  auto randn = [&](int d) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = nd(rng);
    return x;
  };
  const double amp = std::pow(8.0 * beta / delta, beta);
  for (int t = 0; t < trials; ++t) {
    if (!(eps >= 0 && eps < std::pow(delta / (8.0 * beta), beta))) {
      rep.skipped++;
      continue;
    }
    // Build a set whose independence sits in [δ, ~2δ] half of the time.
    std::vector<Eigen::VectorXd> n;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      n.clear();
      n.push_back(randn(dim).normalized());
      const bool tight = ud(rng) < 0.5;
      for (int k = 1; k < beta; ++k) {
        Eigen::VectorXd in_span = Eigen::VectorXd::Zero(dim);
        for (const auto& x : n) in_span += nd(rng) * x;
        Eigen::VectorXd out = randn(dim);
        for (int pass = 0; pass < 2; ++pass) {
          Eigen::MatrixXd q(dim, n.size());
          for (std::size_t j = 0; j < n.size(); ++j) q.col(j) = n[j];
          Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
          Eigen::MatrixXd qq = qr.householderQ() * Eigen::MatrixXd::Identity(dim, n.size());
          out -= qq * (qq.transpose() * out);
        }
        out.normalize();
        const double s = tight ? delta * (1.0 + 1.5 * ud(rng)) : ud(rng) + delta;
        Eigen::VectorXd v = std::sqrt(std::max(0.0, 1 - s * s)) * in_span.normalized() + std::min(s, 1.0) * out;
        n.push_back(v.normalized());
      }
      if (min_span_distance(n) >= delta) break;
      n.clear();
    }
    if (n.empty()) {
      rep.skipped++;
      continue;
    }
    std::vector<Eigen::VectorXd> nt;
    for (const auto& x : n) {
      Eigen::VectorXd p = randn(dim).normalized() * (0.45 * eps * ud(rng));
      nt.push_back(eps == 0 ? x : Eigen::VectorXd((x + p).normalized()));  // ‖η - η̃‖ <= 2·0.45ε < ε
    }
    auto g = plain_gs(n), gt = plain_gs(nt);
    double worst = 0.0;
    Eigen::MatrixXd pd = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < beta; ++i) {
      worst = std::max(worst, (g[i] - gt[i]).norm());
      pd += g[i] * g[i].transpose() - gt[i] * gt[i].transpose();
    }
    const double gs_bound = amp * eps;
    const double proj = oracle::spectral_norm(pd);
    rep.trials++;
    if (eps > 0) {
      rep.worst_gs_ratio = std::max(rep.worst_gs_ratio, worst / gs_bound);
      rep.worst_proj_ratio = std::max(rep.worst_proj_ratio, proj / (2 * beta * gs_bound));
    }
    if (worst > gs_bound) rep.gs_violations++;
    if (eps == 0 ? proj > 0 : proj >= 2 * beta * gs_bound) rep.proj_violations++;
  }
  return rep;
}

}  // namespace hodge
