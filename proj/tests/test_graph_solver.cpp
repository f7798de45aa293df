#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hodge/chain_ops.hpp"
#include "hodge/error.hpp"
#include "hodge/graph_solver.hpp"
#include "hodge/oracle.hpp"

using namespace hodge;
using oracle::Mat;

namespace {

Mat dense_incidence(const Graph& g) {
  Mat b = Mat::Zero(g.num_nodes(), g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    b(g.tail(e), e) -= 1.0;
    b(g.head(e), e) += 1.0;
  }
  return b;
}

double asym(const Mat& a) { return (a - a.transpose()).cwiseAbs().maxCoeff(); }

std::shared_ptr<const Graph> skeleton(const RawComplex& raw, bool k_only = false) {
  auto cx = EmbeddedComplex::build(raw);
  Scope s = k_only ? Scope::subcomplex_K(cx) : Scope::full(cx);
  return std::make_shared<const Graph>(Graph::from_scope(s));
}

void check_sandwich(const GraphProjector& gp, double eps) {
  const Graph& g = gp.graph();
  const int n1 = g.num_edges();
  Mat b = dense_incidence(g);
  Mat p_cbd = oracle::range_projector(b.transpose());
  Mat p_cyc = Mat::Identity(n1, n1) - p_cbd;
  Mat ld_pinv = oracle::pinv(b.transpose() * b);

  Mat cbd = oracle::materialize(n1, [&](std::span<const double> x) { return gp.proj_cbd(eps, x); });
  Mat cyc = oracle::materialize(n1, [&](std::span<const double> x) { return gp.proj_cyc(eps, x); });
  Mat dn = oracle::materialize(n1, [&](std::span<const double> x) { return gp.down_solve(eps, x); });
  CHECK(asym(cbd) <= 1e-12);
  CHECK(asym(cyc) <= 1e-12);
  CHECK(asym(dn) <= 1e-12 * std::max(1.0, dn.cwiseAbs().maxCoeff()));
  Mat sym_cbd = 0.5 * (cbd + cbd.transpose()), sym_cyc = 0.5 * (cyc + cyc.transpose());
  Mat sym_dn = 0.5 * (dn + dn.transpose());
  CHECK(oracle::loewner_check(sym_cbd, p_cbd, 1e-9).ok);
  CHECK(oracle::loewner_check((1 - eps) * p_cbd, sym_cbd, 1e-9).ok);
  CHECK(oracle::loewner_check(sym_cyc, p_cyc, 1e-9).ok);
  CHECK(oracle::loewner_check((1 - eps) * p_cyc, sym_cyc, 1e-9).ok);
  const double tol = 1e-9 * std::max(1.0, oracle::max_eig(ld_pinv));
  CHECK(oracle::loewner_check(sym_dn, ld_pinv, tol).ok);
  CHECK(oracle::loewner_check((1 - eps) * ld_pinv, sym_dn, tol).ok);
}

}  // namespace

TEST_CASE("P_T on the triangle graph") {
  Graph g(3, {{0, 1}, {1, 2}, {0, 2}});
  SpanningTreeOp t(g, {0, 1});
  CHECK(t.apply(std::vector<double>{0, 0, 1}) == std::vector<double>{1, 1, 0});
  CHECK(t.apply(std::vector<double>{2, -3, 0}) == std::vector<double>{2, -3, 0});
  CHECK(t.fundamental_cycle(2) == std::vector<double>{-1, -1, 1});
  CHECK_THROWS_AS(SpanningTreeOp(g, {0}), Error);
  CHECK_THROWS_AS(SpanningTreeOp(g, {0, 1, 2}), Error);
}

TEST_CASE("P_T preserves boundaries exactly") {
  std::mt19937_64 rng(3);
  for (auto raw : {gen::grid_ball(3, {gen::KKind::Full}), gen::annulus_in_ball(3), gen::ball(12, {gen::KKind::Full})}) {
    auto g = skeleton(raw);
    SpanningTreeOp t(*g);
    for (int trial = 0; trial < 5; ++trial) {
      auto x = fx::random_ints(g->num_edges(), rng, -9, 9);
      auto y = t.apply(x);
      CHECK(g->boundary(y) == g->boundary(x));
      for (int e = 0; e < g->num_edges(); ++e)
        if (!t.is_tree_edge(e)) CHECK(y[e] == 0.0);
      CHECK(t.apply(y) == y);
      // adjoint
      auto z = fx::random_ints(g->num_edges(), rng, -9, 9);
      auto tz = t.apply_transpose(z);
      double lhs = 0, rhs = 0;
      for (int e = 0; e < g->num_edges(); ++e) {
        lhs += y[e] * z[e];
        rhs += x[e] * tz[e];
      }
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("(I-P_T)(I-P_T)^T is bounded by n1^2") {
  auto g = skeleton(gen::grid_ball(2, {gen::KKind::Full}));
  SpanningTreeOp t(*g);
  const int n1 = g->num_edges();
  Mat p = oracle::materialize(n1, [&](std::span<const double> x) { return t.apply(x); });
  Mat q = Mat::Identity(n1, n1) - p;
  CHECK(oracle::max_eig(q * q.transpose()) <= double(n1) * n1);
}

TEST_CASE("fill ignores the tree part of its input") {
  auto cx = EmbeddedComplex::build(gen::grid_ball(3, {gen::KKind::Full}));
  Scope x = Scope::full(cx);
  FillPlan fill(x, normalize(*cx, CollapsingSequence::from_complex(*cx)));
  Graph g = Graph::from_scope(x);
  SpanningTreeOp t(g, fill.tree_edges());
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto y = fx::random_ints(g.num_edges(), rng);
    auto py = t.apply(y);
    auto gamma = y;
    for (std::size_t i = 0; i < y.size(); ++i) gamma[i] -= py[i];
    CHECK(fill.apply(y) == fill.apply(gamma));
  }
}

TEST_CASE("projection examples") {
  auto g = skeleton(gen::grid_ball(3, {gen::KKind::Full}));
  GraphProjector gp(g, SddOptions{});
  std::mt19937_64 rng(7);
  const double eps = 0.01;
  auto f = fx::random_ints(g->num_nodes(), rng);
  auto x = g->coboundary(f);
  auto px = gp.proj_cbd(eps, x);
  double err = 0, nx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    err += (px[i] - x[i]) * (px[i] - x[i]);
    nx += x[i] * x[i];
  }
  CHECK(std::sqrt(err) <= eps * std::sqrt(nx));

  SpanningTreeOp t(*g);
  auto c = t.fundamental_cycle(0);
  for (int e = 0; e < g->num_edges(); ++e)
    if (!t.is_tree_edge(e)) {
      c = t.fundamental_cycle(e);
      break;
    }
  auto pc = gp.proj_cbd(eps, c);
  auto qc = gp.proj_cyc(eps, c);
  double nc = kernels::norm2(c);
  CHECK(kernels::norm2(pc) <= 1e-9 * nc);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(qc[i] == doctest::Approx(c[i]).epsilon(eps));
  // complementarity up to the approximation
  for (int trial = 0; trial < 3; ++trial) {
    auto v = fx::random_ints(g->num_edges(), rng);
    auto a = gp.proj_cbd(eps, v), b = gp.proj_cyc(eps, v);
    double d = 0;
    for (std::size_t i = 0; i < v.size(); ++i) d += std::pow(a[i] + b[i] - v[i], 2);
    CHECK(std::sqrt(d) <= 2 * eps * kernels::norm2(v));
  }
  CHECK_THROWS_AS(gp.proj_cbd(0.0, std::vector<double>(g->num_edges(), 1.0)), Error);
}

TEST_CASE("down_solve examples") {
  auto g = std::make_shared<const Graph>(3, std::vector<std::array<int, 2>>{{0, 1}, {1, 2}});
  GraphProjector gp(g, SddOptions{});
  Mat b = dense_incidence(*g);
  Mat ld_pinv = oracle::pinv(b.transpose() * b);
  const double eps = 0.01;
  for (int v = 0; v < 3; ++v) {
    std::vector<double> e(3, 0.0);
    e[v] = 1.0;
    auto rhs = g->coboundary(e);
    auto got = oracle::to_vec(gp.down_solve(eps, rhs));
    oracle::Vec want = ld_pinv * oracle::to_vec(rhs);
    CHECK((got - want).norm() <= eps * want.norm() + 1e-12);
  }

  auto h = skeleton(gen::grid_ball(2, {gen::KKind::Full}));
  GraphProjector hp(h, SddOptions{});
  SpanningTreeOp t(*h);
  for (int e = 0; e < h->num_edges(); ++e)
    if (!t.is_tree_edge(e)) {
      auto c = t.fundamental_cycle(e);
      CHECK(kernels::norm2(hp.down_solve(eps, c)) <= 1e-9);
      break;
    }
  std::mt19937_64 rng(11);
  Mat bh = dense_incidence(*h);
  auto y = oracle::to_vec(fx::random_ints(h->num_edges(), rng));
  oracle::Vec rhs = bh.transpose() * (bh * y);
  auto got = oracle::to_vec(hp.down_solve(eps, oracle::to_std(rhs)));
  oracle::Vec want = oracle::range_projector(bh.transpose()) * y;
  CHECK((got - want).norm() <= eps * want.norm());
}

TEST_CASE("Loewner sandwiches against the dense oracle") {
  for (auto pc : {Precond::Amg, Precond::Jacobi, Precond::None}) {
    SddOptions opt;
    opt.precond = pc;
    CAPTURE(int(pc));
    check_sandwich(GraphProjector(skeleton(gen::grid_ball(2, {gen::KKind::Full})), opt), 0.01);
    check_sandwich(GraphProjector(skeleton(gen::annulus_in_ball(3), true), opt), 0.05);
  }
  // disconnected graph with an isolated node and a self-loop
  auto g = std::make_shared<const Graph>(6, std::vector<std::array<int, 2>>{{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 4}});
  check_sandwich(GraphProjector(g, SddOptions{}), 0.01);
}

TEST_CASE("dual graph projector") {
  auto cx = EmbeddedComplex::build(gen::grid_ball(2, {gen::KKind::Full}));
  Scope x = Scope::full(cx);
  auto g = std::make_shared<const Graph>(Graph::from_dual(build_dual_graph(x)));
  CHECK(g->num_components() == 1);
  check_sandwich(GraphProjector(g, SddOptions{}), 0.01);
}

TEST_CASE("pcg residual contract and multigrid hierarchy") {
  auto g = skeleton(gen::grid_ball(6, {gen::KKind::Full}));
  SddSolver amg(g, SddOptions{});
  SddOptions jo;
  jo.precond = Precond::Jacobi;
  SddSolver jac(g, jo);
  CHECK(amg.amg_levels() >= 2);
  CHECK(amg.interval_hi() >= 1.0);
  CHECK(amg.interval_lo() > 0.0);
  std::mt19937_64 rng(13);
  auto b = fx::random_ints(g->num_nodes(), rng);
  g->project_out_kernel(b);
  int ia = 0, ij = 0;
  auto xa = amg.pcg(b, 1e-10, &ia);
  auto xj = jac.pcg(b, 1e-10, &ij);
  auto r = g->laplacian_apply(xa);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  CHECK(kernels::norm2(r) <= 1e-10 * kernels::norm2(b));
  CHECK(ia < ij);
  CHECK(amg.degree_for(1e-4) < jac.degree_for(1e-4));
  SddOptions tight = jo;
  tight.max_iters = 2;
  CHECK_THROWS_AS(SddSolver(g, tight).pcg(b, 1e-12), Error);
}

TEST_CASE("lanczos with and without reorthogonalization") {
  auto g = skeleton(gen::grid_ball(5, {gen::KKind::Full}));
  const auto& l = g->laplacian();
  Mat dense = Mat::Zero(l.rows, l.rows);
  for (int i = 0; i < l.rows; ++i)
    for (int k = l.row_ptr[i]; k < l.row_ptr[i + 1]; ++k) dense(i, l.col[k]) = l.val[k];
  Eigen::SelfAdjointEigenSolver<Mat> es(dense);
  const double top = es.eigenvalues()(l.rows - 1);
  double low = top;
  for (Eigen::Index i = 0; i < l.rows; ++i)
    if (es.eigenvalues()(i) > 1e-9 * top) {
      low = es.eigenvalues()(i);
      break;
    }
  auto op = [&](std::span<const double> y) { return g->laplacian_apply(y); };
  Vecd v = random_vector(l.rows, 21);
  g->project_out_kernel(v);
  auto full = lanczos_extremes(op, v, 150, 1e-10, true, true);
  auto plain = lanczos_extremes(op, v, 150, 1e-10, true, false);
  CHECK(full.hi == doctest::Approx(top).epsilon(1e-8));
  CHECK(plain.hi == doctest::Approx(top).epsilon(1e-8));
  CHECK(full.lo == doctest::Approx(low).epsilon(1e-6));
  CHECK(plain.lo == doctest::Approx(low).epsilon(1e-6));
}

TEST_CASE("multigrid on a dual graph with void nodes") {
  auto cx = EmbeddedComplex::build(gen::grid_ball(7, {gen::KKind::Tunnels, 1}));
  auto g = std::make_shared<const Graph>(Graph::from_dual(build_dual_graph(Scope::subcomplex_K(cx))));
  AmgHierarchy h(g->laplacian(), 40, 2, true);
  auto stats = h.level_stats();
  REQUIRE(stats.size() >= 2);
  CHECK(stats[1].first < stats[0].first / 2);
  for (auto [rows, nnz] : stats) CHECK(static_cast<double>(nnz) / rows <= 60.0);
  SddSolver s(g, SddOptions{});
  CHECK(s.ritz_min() >= 0.2);
  CHECK(s.ritz_max() <= 1.0 + 1e-9);
}
