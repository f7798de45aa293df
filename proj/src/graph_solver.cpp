#include "hodge/graph_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <tuple>

#include "hodge/error.hpp"

namespace hodge {

using kernels::Csr;
using kernels::Triplet;

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(int num_nodes, std::vector<std::array<int, 2>> edges) : n_(num_nodes), edges_(std::move(edges)) {
  std::vector<Triplet> tb, tl;
  tb.reserve(edges_.size() * 2);
  tl.reserve(edges_.size() * 4);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto [t, h] = edges_[e];
    if (t < 0 || h < 0 || t >= n_ || h >= n_) throw Error(ErrorCode::InvalidInput, "edge endpoint out of range");
    tb.push_back({t, static_cast<int>(e), -1.0});
    tb.push_back({h, static_cast<int>(e), 1.0});
    if (t != h) {
      tl.push_back({t, t, 1.0});
      tl.push_back({h, h, 1.0});
      tl.push_back({t, h, -1.0});
      tl.push_back({h, t, -1.0});
    }
  }
  b_ = kernels::csr_from_triplets(n_, static_cast<int>(edges_.size()), std::move(tb));
  bt_ = kernels::transpose(b_);
  l_ = kernels::csr_from_triplets(n_, n_, std::move(tl));

  comp_.assign(n_, -1);
  for (int s = 0; s < n_; ++s) {
    if (comp_[s] >= 0) continue;
    std::deque<int> q{s};
    comp_[s] = ncomp_;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int k = l_.row_ptr[v]; k < l_.row_ptr[v + 1]; ++k) {
        int w = l_.col[k];
        if (comp_[w] < 0) {
          comp_[w] = ncomp_;
          q.push_back(w);
        }
      }
    }
    ++ncomp_;
  }
  comp_size_.assign(ncomp_, 0);
  for (int c : comp_) comp_size_[c]++;
}

Graph Graph::from_scope(const Scope& s) {
  const auto& cx = s.complex();
  std::vector<std::array<int, 2>> e;
  e.reserve(s.count(1));
  for (int g : s.globals(1)) {
    auto f = cx.faces(1, g);  // f[0] = later vertex (+1), f[1] = earlier vertex (-1)
    e.push_back({s.to_local(0, f[1]), s.to_local(0, f[0])});
  }
  return Graph(static_cast<int>(s.count(0)), std::move(e));
}

Graph Graph::from_dual(const DualGraph& g) {
  std::vector<std::array<int, 2>> e;
  e.reserve(g.edges.size());
  for (const auto& d : g.edges) e.push_back({d.tail, d.head});
  return Graph(g.num_nodes, std::move(e));
}

void Graph::project_out_kernel(std::span<double> phi) const {
  std::vector<double> sum(ncomp_, 0.0);
  for (int v = 0; v < n_; ++v) sum[comp_[v]] += phi[v];
  for (int v = 0; v < n_; ++v) phi[v] -= sum[comp_[v]] / comp_size_[comp_[v]];
}

// ---------------------------------------------------------------------------
// SpanningTreeOp

SpanningTreeOp::SpanningTreeOp(const Graph& g) : g_(&g) {
  std::vector<int> tree;
  std::vector<std::uint8_t> seen(g.num_nodes(), 0);
  const auto& b = g.incidence();
  for (int s = 0; s < g.num_nodes(); ++s) {
    if (seen[s]) continue;
    std::deque<int> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int k = b.row_ptr[v]; k < b.row_ptr[v + 1]; ++k) {
        int e = b.col[k];
        int w = g.tail(e) == v ? g.head(e) : g.tail(e);
        if (!seen[w]) {
          seen[w] = 1;
          tree.push_back(e);
          q.push_back(w);
        }
      }
    }
  }
  build(tree);
}

SpanningTreeOp::SpanningTreeOp(const Graph& g, const std::vector<int>& tree_edges) : g_(&g) { build(tree_edges); }

void SpanningTreeOp::build(const std::vector<int>& tree_edges) {
  const Graph& g = *g_;
  const int n = g.num_nodes();
  tree_edges_ = tree_edges;
  in_tree_.assign(g.num_edges(), 0);
  std::vector<std::vector<int>> adj(n);
  for (int e : tree_edges) {
    if (e < 0 || e >= g.num_edges() || in_tree_[e]) throw Error(ErrorCode::InvalidInput, "bad tree edge list");
    if (g.tail(e) == g.head(e)) throw Error(ErrorCode::InvalidInput, "self-loop in tree");
    in_tree_[e] = 1;
    adj[g.tail(e)].push_back(e);
    adj[g.head(e)].push_back(e);
  }
  if (static_cast<int>(tree_edges.size()) != n - g.num_components())
    throw Error(ErrorCode::InvalidInput, "tree edges do not form a spanning forest");
  parent_.assign(n, -1);
  parent_edge_.assign(n, -1);
  up_sign_.assign(n, 0.0);
  order_.clear();
  std::vector<std::uint8_t> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::size_t head = order_.size();
    order_.push_back(s);
    seen[s] = 1;
    while (head < order_.size()) {
      int v = order_[head++];
      for (int e : adj[v]) {
        if (e == parent_edge_[v]) continue;
        int w = g.tail(e) == v ? g.head(e) : g.tail(e);
        if (seen[w]) throw Error(ErrorCode::InvalidInput, "tree edges contain a cycle");
        seen[w] = 1;
        parent_[w] = v;
        parent_edge_[w] = e;
        up_sign_[w] = g.head(e) == w ? 1.0 : -1.0;
        order_.push_back(w);
      }
    }
  }
}

Vecd SpanningTreeOp::apply(std::span<const double> x) const {
  Vecd acc = g_->boundary(x);
  Vecd y(g_->num_edges(), 0.0);
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    int v = *it;
    if (parent_[v] < 0) continue;
    y[parent_edge_[v]] = up_sign_[v] * acc[v];
    acc[parent_[v]] += acc[v];
  }
  return y;
}

Vecd SpanningTreeOp::apply_transpose(std::span<const double> z) const {
  Vecd phi(g_->num_nodes(), 0.0);
  for (int v : order_)
    if (parent_[v] >= 0) phi[v] = phi[parent_[v]] + up_sign_[v] * z[parent_edge_[v]];
  return g_->coboundary(phi);
}

Vecd SpanningTreeOp::fundamental_cycle(int edge) const {
  Vecd x(g_->num_edges(), 0.0);
  x[edge] = 1.0;
  Vecd p = apply(x);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= p[i];
  return x;
}

// ---------------------------------------------------------------------------
// Aggregation multigrid

namespace {

Csr spgemm(const Csr& a, const Csr& b) {
  Csr c;
  c.rows = a.rows;
  c.cols = b.cols;
  c.row_ptr.assign(a.rows + 1, 0);
  std::vector<double> acc(b.cols, 0.0);
  std::vector<int> mark(b.cols, -1);
  std::vector<int> touched;
  for (int i = 0; i < a.rows; ++i) {
    touched.clear();
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int r = a.col[k];
      const double av = a.val[k];
      for (int q = b.row_ptr[r]; q < b.row_ptr[r + 1]; ++q) {
        const int j = b.col[q];
        if (mark[j] != i) {
          mark[j] = i;
          acc[j] = 0.0;
          touched.push_back(j);
        }
        acc[j] += av * b.val[q];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int j : touched)
      if (acc[j] != 0.0) {
        c.col.push_back(j);
        c.val.push_back(acc[j]);
      }
    c.row_ptr[i + 1] = static_cast<int>(c.col.size());
  }
  return c;
}

Csr symmetrize(const Csr& a) {
  Csr t = kernels::transpose(a);
  std::vector<Triplet> trip;
  trip.reserve(a.nnz() * 2);
  for (int r = 0; r < a.rows; ++r) {
    for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) trip.push_back({r, a.col[k], 0.5 * a.val[k]});
    for (int k = t.row_ptr[r]; k < t.row_ptr[r + 1]; ++k) trip.push_back({r, t.col[k], 0.5 * t.val[k]});
  }
  return kernels::csr_from_triplets(a.rows, a.cols, std::move(trip));
}

// Rows with far more couplings than average (void regions of a dual graph).
std::vector<std::uint8_t> hub_rows(const Csr& a) {
  const int n = a.rows;
  std::vector<int> deg(n, 0);
  long long off = 0;
  for (int i = 0; i < n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (a.col[k] != i) deg[i]++, off++;
  const double cap = std::max(32.0, 8.0 * static_cast<double>(off) / std::max(1, n));
  std::vector<std::uint8_t> hub(n, 0);
  for (int i = 0; i < n; ++i) hub[i] = deg[i] > cap;
  return hub;
}

std::vector<int> aggregate(const Csr& a, const std::vector<std::uint8_t>& hub, int& nagg) {
  const int n = a.rows;
  std::vector<double> rmax(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (a.col[k] != i && !hub[a.col[k]]) rmax[i] = std::max(rmax[i], std::abs(a.val[k]));
  // strong couplings only; hubs are left out of every neighborhood
  auto strong = [&](int i, int k) {
    const int j = a.col[k];
    return j != i && !hub[j] && std::abs(a.val[k]) >= 0.25 * rmax[i];
  };
  std::vector<int> agg(n, -1);
  nagg = 0;
  for (int i = 0; i < n; ++i)
    if (hub[i]) agg[i] = nagg++;
  // phase 1: seeds whose whole strong neighborhood is free
  for (int i = 0; i < n; ++i) {
    if (agg[i] >= 0) continue;
    bool free = true;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1] && free; ++k)
      if (strong(i, k) && agg[a.col[k]] >= 0) free = false;
    if (!free) continue;
    agg[i] = nagg;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (strong(i, k)) agg[a.col[k]] = nagg;
    ++nagg;
  }
  // phase 2: attach to the strongest aggregated neighbor
  std::vector<int> snap = agg;
  for (int i = 0; i < n; ++i) {
    if (snap[i] >= 0) continue;
    double best = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      int j = a.col[k];
      if (strong(i, k) && snap[j] >= 0 && std::abs(a.val[k]) > best) {
        best = std::abs(a.val[k]);
        agg[i] = snap[j];
      }
    }
  }
  // phase 3: leftovers
  for (int i = 0; i < n; ++i) {
    if (agg[i] >= 0) continue;
    agg[i] = nagg;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (strong(i, k) && agg[a.col[k]] < 0) agg[a.col[k]] = nagg;
    ++nagg;
  }
  return agg;
}

}  // namespace

AmgHierarchy::AmgHierarchy(const Csr& a0, int coarse_size, int sweeps, bool smoothed) : sweeps_(std::max(1, sweeps)) {
  Csr a = a0;
  while (a.rows > coarse_size && levels_.size() < 30) {
    Level lv;
    lv.a = a;
    const int n = a.rows;
    lv.dinv.assign(n, 0.0);
    double rho = 0.0;
    for (int i = 0; i < n; ++i) {
      double diag = 0.0, rs = 0.0;
      for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
        if (a.col[k] == i) diag = a.val[k];
        rs += std::abs(a.val[k]);
      }
      if (diag > 0) {
        lv.dinv[i] = 1.0 / diag;
        rho = std::max(rho, rs / diag);
      }
    }
    if (rho == 0.0) break;
    lv.omega = (4.0 / 3.0) / rho;  // Gershgorin bound on ρ(D⁻¹A) keeps Jacobi convergent
    const auto hub = hub_rows(a);
    int nagg = 0;
    auto agg = aggregate(a, hub, nagg);
    // a too small next level would be a poor coarse space; solve this one densely
    if (nagg >= n || nagg == 0 || (nagg < coarse_size && n <= 8 * coarse_size)) break;
    std::vector<int> size(nagg, 0);
    for (int g : agg) size[g]++;
    std::vector<Triplet> tp;
    tp.reserve(n);
    for (int i = 0; i < n; ++i) tp.push_back({i, agg[i], 1.0 / std::sqrt(static_cast<double>(size[agg[i]]))});
    Csr ptent = kernels::csr_from_triplets(n, nagg, tp);
    if (smoothed) {
      // Smooth with a filtered operator: couplings to hub rows (void regions
      // of a dual graph touch every boundary face) are lumped onto the
      // diagonal, otherwise the hubs make the coarse operators dense.
      std::vector<Triplet> tf;
      std::vector<double> fdiag(n, 0.0), fabs(n, 0.0);
      for (int i = 0; i < n; ++i) {
        if (hub[i]) continue;
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
          const int j = a.col[k];
          if (j == i || hub[j]) continue;
          tf.push_back({i, j, a.val[k]});
          fdiag[i] -= a.val[k];
          fabs[i] += std::abs(a.val[k]);
        }
      }
      double frho = 0.0;
      for (int i = 0; i < n; ++i)
        if (fdiag[i] > 0) {
          tf.push_back({i, i, fdiag[i]});
          frho = std::max(frho, 1.0 + fabs[i] / fdiag[i]);
        }
      Csr af = kernels::csr_from_triplets(n, n, std::move(tf));
      const double fomega = frho > 0 ? (4.0 / 3.0) / frho : 0.0;
      Csr ap = spgemm(af, ptent);
      std::vector<Triplet> ts = tp;
      for (int i = 0; i < n; ++i)
        if (fdiag[i] > 0)
          for (int k = ap.row_ptr[i]; k < ap.row_ptr[i + 1]; ++k)
            ts.push_back({i, ap.col[k], -fomega / fdiag[i] * ap.val[k]});
      lv.p = kernels::csr_from_triplets(n, nagg, std::move(ts));
    } else {
      lv.p = std::move(ptent);
    }
    lv.r = kernels::transpose(lv.p);
    a = symmetrize(spgemm(lv.r, spgemm(a, lv.p)));
    levels_.push_back(std::move(lv));
  }
  coarse_a_ = a;
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(a.rows, a.rows);
  for (int r = 0; r < a.rows; ++r)
    for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) dense(r, a.col[k]) = a.val[k];
  dense = 0.5 * (dense + dense.transpose());
  if (a.rows > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    const auto& ev = es.eigenvalues();
    const double top = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > 1e-10 * top) inv(i) = 1.0 / ev(i);
    coarse_pinv_ = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  }
}

void AmgHierarchy::vcycle_level(std::size_t l, std::span<const double> b, std::span<double> x) const {
  if (l == levels_.size()) {
    Eigen::Map<const Eigen::VectorXd> bb(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::Map<Eigen::VectorXd> xx(x.data(), static_cast<Eigen::Index>(x.size()));
    xx = coarse_pinv_ * bb;
    return;
  }
  const Level& lv = levels_[l];
  const int n = lv.a.rows;
  std::vector<double> ax(n);
  auto smooth = [&]() {
    kernels::spmv(lv.a, x, ax);
    for (int i = 0; i < n; ++i) x[i] += lv.omega * lv.dinv[i] * (b[i] - ax[i]);
  };
  std::fill(x.begin(), x.end(), 0.0);
  for (int s = 0; s < sweeps_; ++s) smooth();
  kernels::spmv(lv.a, x, ax);
  std::vector<double> res(n);
  for (int i = 0; i < n; ++i) res[i] = b[i] - ax[i];
  std::vector<double> rc(lv.r.rows), xc(lv.r.rows);
  kernels::spmv(lv.r, res, rc);
  vcycle_level(l + 1, rc, xc);
  std::vector<double> px(n);
  kernels::spmv(lv.p, xc, px);
  for (int i = 0; i < n; ++i) x[i] += px[i];
  for (int s = 0; s < sweeps_; ++s) smooth();
}

std::vector<std::pair<int, std::size_t>> AmgHierarchy::level_stats() const {
  std::vector<std::pair<int, std::size_t>> out;
  for (const auto& l : levels_) out.emplace_back(l.a.rows, l.a.nnz());
  out.emplace_back(coarse_a_.rows, coarse_a_.nnz());
  return out;
}

Vecd AmgHierarchy::vcycle(std::span<const double> b) const {
  Vecd x(b.size(), 0.0);
  vcycle_level(0, b, x);
  return x;
}

// ---------------------------------------------------------------------------
// Lanczos

RitzRange lanczos_extremes(const ApplyFn& op, Vecd v, int max_steps, double kernel_cut, bool residual_filter,
                           bool full_reorth) {
  RitzRange out;
  double nv = kernels::norm2(v);
  if (nv == 0.0 || max_steps <= 0) return out;
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXd q(n, full_reorth ? max_steps : 2);
  q.col(0) = Eigen::Map<const Eigen::VectorXd>(v.data(), n) / nv;
  std::vector<double> alpha, beta;
  double scale = 0.0, last_beta = 0.0;
  for (int j = 0; j < max_steps; ++j) {
    const Eigen::Index cur = full_reorth ? j : j % 2;
    Vecd w = op(std::span<const double>(q.col(cur).data(), v.size()));
    Eigen::Map<Eigen::VectorXd> wm(w.data(), n);
    double a = wm.dot(q.col(cur));
    alpha.push_back(a);
    scale = std::max(scale, std::abs(a));
    if (full_reorth) {
      // classical Gram-Schmidt twice against the whole basis
      const auto basis = q.leftCols(j + 1);
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd c = basis.transpose() * wm;
        wm.noalias() -= basis * c;
      }
    } else {
      wm.noalias() -= a * q.col(cur);
      if (j > 0) wm.noalias() -= beta.back() * q.col(1 - cur);
    }
    double b = wm.norm();
    last_beta = b;
    // an exhausted Krylov space leaves only rounding noise, which leaks into the kernel
    if (b <= 1e-8 * scale || j + 1 == max_steps) break;
    beta.push_back(b);
    scale = std::max(scale, b);
    q.col(full_reorth ? j + 1 : 1 - cur) = wm / b;
  }
  const int m = static_cast<int>(alpha.size());
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
  Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, residual_filter ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  out.hi = ev(m - 1);
  out.lo = out.hi;
  for (int i = 0; i < m; ++i) {
    if (ev(i) <= kernel_cut * out.hi) continue;
    if (residual_filter && std::abs(last_beta * es.eigenvectors()(m - 1, i)) > ev(i)) continue;
    out.lo = ev(i);
    break;
  }
  out.steps = m;
  return out;
}

// ---------------------------------------------------------------------------
// SddSolver

SddSolver::SddSolver(std::shared_ptr<const Graph> g, const SddOptions& opt) : g_(std::move(g)), opt_(opt) {
  const auto& l = g_->laplacian();
  trivial_ = l.nnz() == 0;
  if (trivial_) return;
  dinv_.assign(l.rows, 0.0);
  for (int i = 0; i < l.rows; ++i)
    for (int k = l.row_ptr[i]; k < l.row_ptr[i + 1]; ++k)
      if (l.col[k] == i && l.val[k] > 0) dinv_[i] = 1.0 / l.val[k];
  if (opt_.precond == Precond::Amg) amg_ = std::make_unique<AmgHierarchy>(l, opt_.coarse_size, opt_.smooth_sweeps, opt_.smoothed_prolongator);
  estimate_interval();
}

Vecd SddSolver::precondition(std::span<const double> r) const {
  Vecd z(r.begin(), r.end());
  g_->project_out_kernel(z);
  switch (opt_.precond) {
    case Precond::None: break;
    case Precond::Jacobi:
      for (std::size_t i = 0; i < z.size(); ++i) z[i] *= dinv_[i];
      break;
    case Precond::Amg: z = amg_->vcycle(z); break;
  }
  g_->project_out_kernel(z);
  return z;
}

void SddSolver::estimate_interval() {
  const auto& l = g_->laplacian();
  const int n = l.rows;
  Vecd b = random_vector(n, opt_.seed);
  g_->project_out_kernel(b);
  // Lanczos coefficients from preconditioned CG.
  const int steps = opt_.precond == Precond::Amg ? opt_.lanczos_steps : std::max(opt_.lanczos_steps, std::min(n, 400));
  Vecd x(n, 0.0), r = b, z = precondition(r), p = z;
  double rz = kernels::dot(r, z);
  const double r0 = std::sqrt(std::abs(rz));
  std::vector<double> alphas, betas;
  // Ritz values of the CG tridiagonal after m steps
  auto ritz = [&](int m) {
    Eigen::VectorXd d(m), e(std::max(0, m - 1));
    for (int j = 0; j < m; ++j) {
      d(j) = 1.0 / alphas[j] + (j > 0 ? betas[j - 1] / alphas[j - 1] : 0.0);
      if (j + 1 < m) e(j) = std::sqrt(betas[j]) / alphas[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    return std::pair{es.eigenvalues()(0), es.eigenvalues()(m - 1)};
  };
  double prev_min = -1.0;
  for (int j = 0; j < steps && rz > 0; ++j) {
    Vecd q = kernels::spmv(l, p);
    double pq = kernels::dot(p, q);
    if (pq <= 0) break;
    double a = rz / pq;
    alphas.push_back(a);
    kernels::axpy(a, p, x);
    kernels::axpy(-a, q, r);
    z = precondition(r);
    double rz_new = kernels::dot(r, z);
    if (std::sqrt(std::abs(rz_new)) <= 1e-14 * r0) break;
    double bta = rz_new / rz;
    betas.push_back(bta);
    // stop once the smallest Ritz value has settled (lower_safety covers the rest)
    const int m = static_cast<int>(alphas.size());
    if (opt_.precond == Precond::Amg && m >= 20 && m % 5 == 0) {
      const double cur = ritz(m).first;
      if (prev_min > 0 && std::abs(prev_min - cur) <= 0.01 * cur) {
        rz = rz_new;
        break;
      }
      prev_min = cur;
    }
    for (int i = 0; i < n; ++i) p[i] = z[i] + bta * p[i];
    rz = rz_new;
  }
  const int m = static_cast<int>(alphas.size());
  if (m == 0) {
    trivial_ = true;
    return;
  }
  std::tie(ritz_min_, ritz_max_) = ritz(m);

  double safe_hi = 0.0;
  switch (opt_.precond) {
    case Precond::None: {
      for (int i = 0; i < n; ++i) {
        double rs = 0.0;
        for (int k = l.row_ptr[i]; k < l.row_ptr[i + 1]; ++k) rs += std::abs(l.val[k]);
        safe_hi = std::max(safe_hi, rs);
      }
      break;
    }
    case Precond::Jacobi: safe_hi = 2.0; break;
    case Precond::Amg: safe_hi = 1.0; break;
  }
  hi_ = std::max(safe_hi * 1.001, ritz_max_ * opt_.upper_safety);
  lo_ = std::min(ritz_min_ * opt_.lower_safety, 0.5 * hi_);
}

int SddSolver::degree_for(double eps) const {
  if (trivial_) return 0;
  const double eta = std::sqrt(std::clamp(eps, 1e-300, 0.999));
  const double sigma = (hi_ + lo_) / (hi_ - lo_);
  return std::max(1, static_cast<int>(std::ceil(std::acosh(1.0 / eta) / std::acosh(sigma))));
}

Vecd SddSolver::chebyshev(std::span<const double> b, int degree) const {
  const int n = g_->num_nodes();
  Vecd x(n, 0.0);
  if (trivial_ || degree <= 0) return x;
  const auto& l = g_->laplacian();
  const double theta = 0.5 * (hi_ + lo_), delta = 0.5 * (hi_ - lo_);
  const double sigma1 = theta / delta;
  double rho = 1.0 / sigma1;
  Vecd r(b.begin(), b.end());
  g_->project_out_kernel(r);
  Vecd d = precondition(r);
  kernels::scale(1.0 / theta, d);
  Vecd ld(n);
  for (int k = 0; k < degree; ++k) {
    kernels::axpy(1.0, d, x);
    if (k + 1 == degree) break;
    kernels::spmv(l, d, ld);
    kernels::axpy(-1.0, ld, r);
    const double rho_new = 1.0 / (2.0 * sigma1 - rho);
    Vecd mr = precondition(r);
    const double c1 = rho_new * rho, c2 = 2.0 * rho_new / delta;
    for (int i = 0; i < n; ++i) d[i] = c1 * d[i] + c2 * mr[i];
    rho = rho_new;
  }
  apps_ += degree;
  g_->project_out_kernel(x);
  return x;
}

Vecd SddSolver::z_apply(std::span<const double> b, double eps) const {
  const int k = degree_for(eps);
  Vecd c1 = chebyshev(b, k);
  if (trivial_) return c1;
  Vecd lc = g_->laplacian_apply(c1);
  Vecd c2 = chebyshev(lc, k);
  for (std::size_t i = 0; i < c1.size(); ++i) c1[i] = 2.0 * c1[i] - c2[i];
  return c1;
}

Vecd SddSolver::pcg(std::span<const double> bin, double tol, int* iters) const {
  const int n = g_->num_nodes();
  Vecd b(bin.begin(), bin.end());
  g_->project_out_kernel(b);
  Vecd x(n, 0.0);
  if (iters) *iters = 0;
  const double nb = kernels::norm2(b);
  if (trivial_ || nb == 0.0) return x;
  const auto& l = g_->laplacian();
  Vecd r = b, z = precondition(r), p = z;
  double rz = kernels::dot(r, z);
  for (int it = 1; it <= opt_.max_iters; ++it) {
    Vecd q = kernels::spmv(l, p);
    const double a = rz / kernels::dot(p, q);
    kernels::axpy(a, p, x);
    kernels::axpy(-a, q, r);
    if (kernels::norm2(r) <= tol * nb) {
      if (iters) *iters = it;
      g_->project_out_kernel(x);
      return x;
    }
    z = precondition(r);
    const double rz_new = kernels::dot(r, z);
    const double bta = rz_new / rz;
    for (int i = 0; i < n; ++i) p[i] = z[i] + bta * p[i];
    rz = rz_new;
  }
  throw Error(ErrorCode::SolveDiverged, "PCG did not reach tolerance in " + std::to_string(opt_.max_iters) + " iterations");
}

double SddSolver::lambda_min_estimate() const {
  if (lam_min_ >= 0) return lam_min_;
  if (trivial_) return lam_min_ = 0.0;
  Vecd v = random_vector(g_->num_nodes(), opt_.seed + 1);
  g_->project_out_kernel(v);
  auto op = [&](std::span<const double> x) {
    Vecd y = g_->laplacian_apply(x);
    g_->project_out_kernel(y);
    return y;
  };
  auto rr = lanczos_extremes(op, v, std::min(g_->num_nodes(), 300));
  return lam_min_ = rr.lo;
}

// ---------------------------------------------------------------------------
// GraphProjector

GraphProjector::GraphProjector(std::shared_ptr<const Graph> g, const SddOptions& opt,
                               std::optional<std::vector<int>> tree_edges)
    : g_(g), sdd_(g, opt), tree_(tree_edges ? SpanningTreeOp(*g, *tree_edges) : SpanningTreeOp(*g)) {}

Vecd GraphProjector::proj_cbd(double eps, std::span<const double> x) const {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::InvalidParams, "epsilon must lie in (0,1)");
  Vecd bx = g_->boundary(x);
  return g_->coboundary(sdd_.z_apply(bx, eps));
}

Vecd GraphProjector::proj_cyc(double eps, std::span<const double> x) const {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::InvalidParams, "epsilon must lie in (0,1)");
  const double n1 = std::max(1, g_->num_edges());
  const double delta = eps / (2.0 * n1 * n1);
  Vecd y(x.begin(), x.end());
  Vecd pt = tree_.apply_transpose(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= pt[i];
  Vecd c = proj_cbd(delta, y);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c[i];
  Vecd p = tree_.apply(y);
  const double s = 1.0 / (1.0 + delta * n1 * n1);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = s * (y[i] - p[i]);
  return y;
}

Vecd GraphProjector::down_solve(double eps, std::span<const double> b) const {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::InvalidParams, "epsilon must lie in (0,1)");
  // Z does not commute with L, so Z² is compared to L⁺² through
  // ‖L^{1/2} E L^{-1/2}‖ <= eps_z sqrt(kappa); kappa from 2 maxdeg / (4/n²).
  const auto& g = *g_;
  double maxdeg = 0;
  const auto& l = g.laplacian();
  for (int i = 0; i < l.rows; ++i)
    for (int k = l.row_ptr[i]; k < l.row_ptr[i + 1]; ++k)
      if (l.col[k] == i) maxdeg = std::max(maxdeg, l.val[k]);
  const double n = std::max(1, g.num_nodes());
  const double kappa = std::max(1.0, 2.0 * maxdeg * n * n / 4.0);
  const double eta = eps / 2.1;
  const double eps_z = eta / (3.0 * std::sqrt(kappa));
  Vecd bb = g.boundary(b);
  Vecd z1 = sdd_.z_apply(bb, eps_z);
  Vecd z2 = sdd_.z_apply(z1, eps_z);
  Vecd out = g.coboundary(z2);
  kernels::scale(1.0 / (1.0 + eta), out);
  return out;
}

}  // namespace hodge
