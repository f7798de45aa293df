#include "hodge/bases.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "hodge/error.hpp"
#include "hodge/graph_solver.hpp"
#include "hodge/oracle.hpp"

namespace hodge {

std::string to_string(BasisRole r) {
  switch (r) {
    case BasisRole::Homology: return "homology";
    case BasisRole::Cohomology: return "cohomology";
    case BasisRole::Harmonic: return "harmonic";
    case BasisRole::OrthonormalHarmonic: return "orthonormal-harmonic";
  }
  return "?";
}

void BasisSet::refresh_norms() {
  norms.clear();
  max_norm = 0.0;
  for (const auto& c : chains) {
    norms.push_back(kernels::norm2(c));
    max_norm = std::max(max_norm, norms.back());
  }
}

BasisSet homology_basis(const Scope& k) {
  Graph g = Graph::from_scope(k);
  SpanningTreeOp t(g);
  return homology_basis(k, t.tree_edges());
}

BasisSet homology_basis(const Scope& k, const std::vector<int>& tree_edges) {
  const auto& cx = k.complex();
  Graph g = Graph::from_scope(k);
  SpanningTreeOp tree(g, tree_edges);
  const int n1 = g.num_edges();
  std::vector<int> col_of(n1, -1), edge_of;
  for (int e = 0; e < n1; ++e)
    if (!tree.is_tree_edge(e)) {
      col_of[e] = static_cast<int>(edge_of.size());
      edge_of.push_back(e);
    }
  const int ncols = static_cast<int>(edge_of.size());
  const int nrows = static_cast<int>(k.count(2));

  std::vector<std::vector<int>> row_cols(nrows), col_rows(ncols);
  for (int r = 0; r < nrows; ++r) {
    for (int f : cx.faces(2, k.to_global(2, r))) {
      int c = col_of[k.to_local(1, f)];
      if (c >= 0) {
        row_cols[r].push_back(c);
        col_rows[c].push_back(r);
      }
    }
  }
  std::vector<int> rdeg(nrows), cdeg(ncols);
  for (int r = 0; r < nrows; ++r) rdeg[r] = static_cast<int>(row_cols[r].size());
  for (int c = 0; c < ncols; ++c) cdeg[c] = static_cast<int>(col_rows[c].size());
  std::vector<std::uint8_t> row_alive(nrows, 1), col_alive(ncols, 1), pivot(ncols, 0);

  auto kill_row = [&](int r) {
    row_alive[r] = 0;
    for (int c : row_cols[r])
      if (col_alive[c]) cdeg[c]--;
  };
  auto kill_col = [&](int c) {
    col_alive[c] = 0;
    for (int r : col_rows[c])
      if (row_alive[r]) rdeg[r]--;
  };

  // Peeling: a row with one live column, or a column with one live row, is a pivot.
  std::deque<std::pair<int, int>> q;  // (kind, index): 0 row, 1 col
  for (int r = 0; r < nrows; ++r)
    if (rdeg[r] <= 1) q.push_back({0, r});
  for (int c = 0; c < ncols; ++c)
    if (cdeg[c] == 1) q.push_back({1, c});
  auto requeue_row = [&](int r) {
    if (row_alive[r] && rdeg[r] <= 1) q.push_back({0, r});
  };
  auto requeue_col = [&](int c) {
    if (col_alive[c] && cdeg[c] == 1) q.push_back({1, c});
  };
  while (!q.empty()) {
    auto [kind, i] = q.front();
    q.pop_front();
    if (kind == 0) {
      if (!row_alive[i] || rdeg[i] > 1) continue;
      if (rdeg[i] == 0) {
        row_alive[i] = 0;
        continue;
      }
      int c = -1;
      for (int cc : row_cols[i])
        if (col_alive[cc]) c = cc;
      pivot[c] = 1;
      kill_row(i);
      kill_col(c);
      for (int r : col_rows[c]) requeue_row(r);
    } else {
      if (!col_alive[i] || cdeg[i] != 1) continue;
      int r = -1;
      for (int rr : col_rows[i])
        if (row_alive[rr]) r = rr;
      pivot[i] = 1;
      kill_col(i);
      kill_row(r);
      for (int c : row_cols[r]) requeue_col(c);
    }
  }

  // Z2 elimination on the core. Coefficients are ±1 and H1 of a complex in
  // R³ has no torsion, so Z2 pivots are also pivots over the rationals.
  std::vector<int> core_cols;
  std::vector<int> core_index(ncols, -1);
  for (int c = 0; c < ncols; ++c)
    if (col_alive[c]) {
      core_index[c] = static_cast<int>(core_cols.size());
      core_cols.push_back(c);
    }
  const std::size_t words = (core_cols.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> pivrow(core_cols.size());
  if (!core_cols.empty()) {
    std::vector<std::uint64_t> row(words);
    for (int r = 0; r < nrows; ++r) {
      if (!row_alive[r]) continue;
      std::fill(row.begin(), row.end(), 0);
      for (int c : row_cols[r])
        if (col_alive[c]) row[core_index[c] / 64] ^= std::uint64_t{1} << (core_index[c] % 64);
      for (;;) {
        std::size_t w = 0;
        while (w < words && row[w] == 0) ++w;
        if (w == words) break;
        int lead = static_cast<int>(w * 64 + std::countr_zero(row[w]));
        if (pivrow[lead].empty()) {
          pivrow[lead] = row;
          pivot[core_cols[lead]] = 1;
          break;
        }
        for (std::size_t j = w; j < words; ++j) row[j] ^= pivrow[lead][j];
      }
    }
  }

  BasisSet out;
  out.role = BasisRole::Homology;
  for (int c = 0; c < ncols; ++c)
    if (!pivot[c]) {
      out.generators.push_back(edge_of[c]);
      out.chains.push_back(tree.fundamental_cycle(edge_of[c]));
    }
  out.refresh_norms();
  return out;
}

BasisSet cohomology_basis(const CohomologyOperator& c, const BasisSet& homology) {
  BasisSet out;
  out.role = BasisRole::Cohomology;
  for (const auto& gamma : homology.chains) {
    Vecd p = c.apply(gamma);
    for (double& v : p) v = std::nearbyint(v);
    out.chains.push_back(std::move(p));
  }
  out.refresh_norms();
  return out;
}

namespace {

Eigen::MatrixXd stack(const std::vector<Vecd>& v) {
  if (v.empty()) return {};
  Eigen::MatrixXd a(v[0].size(), v.size());
  for (std::size_t j = 0; j < v.size(); ++j) a.col(j) = oracle::to_vec(v[j]);
  return a;
}

// R from a thin QR of the stacked vectors; throws on dependence.
Eigen::MatrixXd thin_r(const Eigen::MatrixXd& a, Eigen::MatrixXd* q) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const auto k = a.cols();
  Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  double top = r.diagonal().cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < k; ++i)
    if (std::abs(r(i, i)) <= 1e-12 * top) throw Error(ErrorCode::DependentInput, "vectors are linearly dependent");
  if (q) *q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), k);
  return r;
}

}  // namespace

Vecd witness(std::size_t idx, const std::vector<Vecd>& v) {
  if (idx >= v.size()) throw Error(ErrorCode::InvalidParams, "witness index out of range");
  Eigen::MatrixXd q;
  Eigen::MatrixXd r = thin_r(stack(v), &q);
  // w = Q R^{-T} e_idx satisfies Vᵀ w = e_idx and lies in span V.
  Eigen::VectorXd e = Eigen::VectorXd::Zero(r.cols());
  e(static_cast<Eigen::Index>(idx)) = 1.0;
  Eigen::VectorXd y = r.transpose().triangularView<Eigen::Lower>().solve(e);
  return oracle::to_std(q * y);
}

std::vector<double> span_distances(const std::vector<Vecd>& v) {
  if (v.size() <= 1) {
    std::vector<double> d;
    for (const auto& x : v) d.push_back(kernels::norm2(x));
    return d;
  }
  Eigen::MatrixXd r = thin_r(stack(v), nullptr);
  Eigen::MatrixXd rinv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(r.rows(), r.cols()));
  std::vector<double> d;
  for (Eigen::Index i = 0; i < r.rows(); ++i) d.push_back(1.0 / rinv.row(i).norm());
  return d;
}

DeltaReport delta_independence_report(const BasisSet& p, const Scope& k, const Scope& x, double lambda_l1up_x,
                                      double lambda_l2up_x, std::size_t cap) {
  DeltaReport rep;
  rep.beta = static_cast<int>(p.size());
  rep.n1 = static_cast<double>(k.count(1));
  rep.n1_x = static_cast<double>(x.count(1));
  rep.n2_x = static_cast<double>(x.count(2));
  rep.p_max = p.max_norm;
  rep.alpha = 16.0 * (rep.n1_x + 1) * (rep.n1_x + 1) / std::max(1.0, rep.n1_x * rep.n1_x);
  auto formula = [&](double lam) {
    return lam > 0 ? std::pow(lam / (rep.alpha * std::pow(rep.n1_x, 3) * std::pow(rep.n2_x, 4)), rep.beta) : 0.0;
  };
  rep.lambda_l1up_x = lambda_l1up_x;
  rep.lambda_l2up_x = lambda_l2up_x;
  rep.delta_formula_l1 = formula(lambda_l1up_x);
  rep.delta_formula_l2 = formula(lambda_l2up_x);
  if (rep.beta == 0) return rep;
  rep.bound = std::pow(std::sqrt(rep.n1) * rep.p_max, -rep.beta);

  oracle::HodgeOracle o(k, cap);
  std::vector<Vecd> h, hn;
  rep.min_h_norm = INFINITY;
  for (const auto& pi : p.chains) {
    oracle::Vec hi = o.P_hr * oracle::to_vec(pi);
    rep.min_h_norm = std::min(rep.min_h_norm, hi.norm());
    h.push_back(oracle::to_std(hi));
    hn.push_back(oracle::to_std(hi / hi.norm()));
  }
  auto d = span_distances(hn);
  rep.delta_measured = *std::min_element(d.begin(), d.end());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack(hn));
  rep.sigma_min = svd.singularValues().minCoeff();
  rep.norm_ok = rep.min_h_norm >= rep.bound;
  rep.delta_ok = rep.delta_measured >= rep.bound;
  return rep;
}

DetBoundReport det_bound_check(const Scope& s, int trials, std::uint64_t seed, int max_n, int max_k) {
  DetBoundReport rep;
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd d1 = oracle::dense_boundary(s, 1);
  if (d1.rows() == 0 || d1.cols() == 0) return rep;
  for (int t = 0; t < trials; ++t) {
    const int n = std::uniform_int_distribution<int>(2, std::min<int>(max_n, static_cast<int>(d1.cols())))(rng);
    const int kk = std::uniform_int_distribution<int>(1, std::min(max_k, n))(rng);
    const int m = n - kk;
    if (m > d1.rows()) continue;
    std::vector<int> rows(d1.rows()), cols(d1.cols());
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    Eigen::MatrixXd b(n, n);
    std::uniform_int_distribution<int> coef(-4, 4);
    double prod = 1.0;
    for (int i = 0; i < kk; ++i) {
      double l1 = 0;
      for (int j = 0; j < n; ++j) {
        b(i, j) = coef(rng);
        l1 += std::abs(b(i, j));
      }
      prod *= l1;
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) b(kk + i, j) = d1(rows[i], cols[j]);
    const double det = std::abs(oracle::Mat(b).determinant());
    rep.trials++;
    if (prod > 0) rep.worst_ratio = std::max(rep.worst_ratio, det / prod);
    if (det > prod + 1e-9) rep.violations++;
  }
  return rep;
}

}  // namespace hodge
