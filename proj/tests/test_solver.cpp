#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hodge/error.hpp"
#include "hodge/oracle.hpp"
#include "hodge/solver.hpp"

using namespace hodge;
using oracle::Mat;
using oracle::Vec;

namespace {

std::unique_ptr<SolverContext> make(const RawComplex& raw, SolverOptions opt = {}) {
  return SolverContext::prepare(EmbeddedComplex::build(raw), opt);
}

double energy(const Mat& l, const Vec& v) { return std::sqrt(std::max(0.0, v.dot(l * v))); }

void check_sandwich(const Mat& m, const Mat& pinv, double eps) {
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  Mat ms = 0.5 * (m + m.transpose());
  CHECK(oracle::loewner_check((1 - eps) * pinv, ms, 1e-9).ok);
  CHECK(oracle::loewner_check(ms, pinv, 1e-9).ok);
}

RawComplex sphere() { return fx::tetrahedron({{2, 0}, {2, 1}, {2, 2}, {2, 3}}); }

}  // namespace

TEST_CASE("U inverts the boundary on im d2") {
  for (auto raw : {gen::annulus_in_ball(3), gen::punctured_disk(2), sphere()}) {
    auto s = make(raw);
    std::mt19937_64 rng(7);
    auto w = fx::random_ints(s->k().count(2), rng);
    auto y = s->k().boundary(2).apply(w);
    auto back = s->k().boundary(2).apply(s->u().apply(y));
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(back[i] == y[i]);
  }
}

TEST_CASE("up_solve examples") {
  const double eps = 0.05;
  for (auto raw : {gen::annulus_in_ball(3), gen::punctured_disk(2), sphere()}) {
    auto s = make(raw);
    oracle::HodgeOracle o(s->k());
    const int n1 = static_cast<int>(s->k().count(1));
    std::mt19937_64 rng(11);
    const double lmin = oracle::min_nonzero_eig(o.L1_up);

    Vec b = (o.P_cbd + o.P_hr) * oracle::to_vec(fx::random_ints(n1, rng));
    CHECK(kernels::norm2(s->up_solve(eps, oracle::to_std(b))) <= 1e-8 * b.norm() / lmin);

    Vec y = oracle::to_vec(fx::random_ints(n1, rng));
    Vec bb = o.L1_up * y;
    Vec truth = o.L1_up_pinv * bb;
    Vec got = oracle::to_vec(s->up_solve(eps, oracle::to_std(bb)));
    CHECK(energy(o.L1_up, got - truth) <= eps * energy(o.L1_up, truth));

    Mat m = oracle::materialize(n1, [&](std::span<const double> x) { return s->up_solve(eps, x); });
    check_sandwich(m, o.L1_up_pinv, eps);
  }
}

TEST_CASE("up_solve through proj_bd when beta is zero") {
  SolverOptions opt;
  opt.beta0_fast_path = false;
  auto s = make(sphere(), opt);
  CHECK_FALSE(s->uses_fast_path());
  oracle::HodgeOracle o(s->k());
  Mat m = oracle::materialize(static_cast<int>(s->k().count(1)),
                              [&](std::span<const double> x) { return s->up_solve(0.05, x); });
  check_sandwich(m, o.L1_up_pinv, 0.05);
}

TEST_CASE("laplacian_solve sandwich") {
  const double eps = 0.05;
  for (auto raw : {gen::annulus_in_ball(3), gen::punctured_disk(2), gen::grid_box(3, 3, 2, {gen::KKind::Disk}), sphere(),
                   gen::grid_box(3, 3, 2, {gen::KKind::Full})}) {
    auto s = make(raw);
    const int n1 = static_cast<int>(s->k().count(1));
    REQUIRE(n1 <= 400);
    oracle::HodgeOracle o(s->k());
    Mat m = oracle::materialize(n1, [&](std::span<const double> x) { return s->laplacian_solve(eps, x); });
    check_sandwich(m, o.L1_pinv, eps);
  }
}

TEST_CASE("laplacian_solve examples") {
  const double eps = 0.05;
  auto s = make(gen::annulus_in_ball(3));
  oracle::HodgeOracle o(s->k());
  const int n1 = static_cast<int>(s->k().count(1));
  std::mt19937_64 rng(13);

  Vec h = o.P_hr * oracle::to_vec(fx::random_ints(n1, rng));
  REQUIRE(h.norm() > 1e-3);
  CHECK(kernels::norm2(s->laplacian_solve(eps, oracle::to_std(h))) <= eps * h.norm());

  Vec y = oracle::to_vec(fx::random_ints(n1, rng));
  Vec b = o.L1 * y;
  Vec truth = o.L1_pinv * b;
  Vec got = oracle::to_vec(s->laplacian_solve(eps, oracle::to_std(b)));
  CHECK(energy(o.L1, got - truth) <= eps * energy(o.L1, truth));

  // additivity: the down part lives in im d1^T
  auto down = s->down_solve(eps, oracle::to_std(b));
  for (int t = 0; t < 5; ++t) {
    auto w = s->k().boundary(2).apply(fx::random_ints(s->k().count(2), rng));
    CHECK(std::abs(kernels::dot(down, w)) <= 1e-9 * std::max(1.0, kernels::norm2(w) * kernels::norm2(down)));
  }
}

TEST_CASE("beta zero paths agree") {
  const double eps = 0.05;
  auto raw = gen::grid_box(3, 3, 2, {gen::KKind::Disk});
  SolverOptions slow;
  slow.beta0_fast_path = false;
  auto a = make(raw);
  auto b = make(raw, slow);
  REQUIRE(a->beta() == 0);
  CHECK(a->uses_fast_path());
  CHECK_FALSE(b->uses_fast_path());
  oracle::HodgeOracle o(a->k());
  std::mt19937_64 rng(17);
  Vec rhs = o.L1 * oracle::to_vec(fx::random_ints(a->k().count(1), rng));
  Vec truth = o.L1_pinv * rhs;
  Vec xa = oracle::to_vec(a->laplacian_solve(eps, oracle::to_std(rhs)));
  Vec xb = oracle::to_vec(b->laplacian_solve(eps, oracle::to_std(rhs)));
  CHECK(energy(o.L1, xa - xb) <= 2 * eps * energy(o.L1, truth));
}

TEST_CASE("proj_ker_perp_d2 examples") {
  const double eps = 0.01;
  for (auto raw : {gen::annulus_in_ball(3), sphere()}) {
    auto s = make(raw);
    const auto& bd2 = s->k().boundary(2);
    std::mt19937_64 rng(19);
    auto w = bd2.apply_transpose(fx::random_ints(s->k().count(1), rng));
    Vec diff = oracle::to_vec(s->proj_ker_perp_d2(eps, w)) - oracle::to_vec(w);
    CHECK(diff.norm() <= eps * kernels::norm2(w));

    Mat d2 = oracle::dense_boundary(s->k(), 2);
    Mat pk = Mat::Identity(d2.cols(), d2.cols()) - oracle::range_projector(d2.transpose());
    Vec z = pk * oracle::to_vec(fx::random_ints(s->k().count(2), rng));
    if (z.norm() > 1e-6) CHECK(kernels::norm2(s->proj_ker_perp_d2(eps, oracle::to_std(z))) <= eps * z.norm());

    Mat pr = oracle::range_projector(d2.transpose());
    const auto& tree = s->k_dual().tree();
    for (int e = 0; e < s->k_dual().graph().num_edges(); ++e) {
      if (tree.is_tree_edge(e)) continue;
      Vec c = oracle::to_vec(tree.fundamental_cycle(e));
      CHECK((c - pr * c).norm() <= 1e-9 * c.norm());
    }
  }
}

TEST_CASE("spectral estimates") {
  auto tri = make(fx::tetrahedron({{2, 0}}));
  CHECK(tri->spectral().lambda_min_k == doctest::Approx(3.0));
  CHECK(tri->spectral().lambda_max_k == doctest::Approx(3.0));

  auto edge = make(fx::tetrahedron({{1, 0}}));
  CHECK(edge->spectral().lambda_max_k == 0.0);
  CHECK(edge->kappa_hat() == 1.0);
  std::vector<double> b(edge->k().count(1), 1.0);
  for (double v : edge->up_solve(0.1, b)) CHECK(v == 0.0);

  for (auto raw : {gen::ball(4, {gen::KKind::Full}), gen::annulus_in_ball(3), gen::grid_box(3, 3, 3, {gen::KKind::Full})}) {
    SolverOptions opt;
    opt.spectral_x = true;
    auto s = make(raw, opt);
    oracle::HodgeOracle ok(s->k(), 4000);
    oracle::HodgeOracle ox(s->x(), 4000);
    const auto& sp = s->spectral();
    CHECK(sp.bound_ok());
    CHECK(sp.lambda_min_k == doctest::Approx(oracle::min_nonzero_eig(ok.L1_up)).epsilon(0.01));
    CHECK(sp.lambda_max_k == doctest::Approx(oracle::max_eig(ok.L1_up)).epsilon(0.01));
    CHECK(sp.lambda_min_x == doctest::Approx(oracle::min_nonzero_eig(ox.L1_up)).epsilon(0.01));
    CHECK(sp.lambda_max_x == doctest::Approx(oracle::max_eig(ox.L1_up)).epsilon(0.01));
    // Lanczos path
    for (int steps : {60, 150, 400}) {
      auto sl = spectral_estimates(s->k(), s->x(), steps, 3, true, 0);
      CHECK(sl.lambda_min_k == doctest::Approx(oracle::min_nonzero_eig(ok.L1_up)).epsilon(0.01));
      CHECK(sl.lambda_max_k == doctest::Approx(oracle::max_eig(ok.L1_up)).epsilon(0.01));
      CHECK(sl.lambda_min_l2up_x > 0);
    }
  }
}

TEST_CASE("prepare rejects bad epsilon") {
  SolverOptions opt;
  opt.eps = 1.5;
  CHECK_THROWS_AS(make(fx::two_tets(), opt), Error);
  auto s = make(fx::two_tets());
  std::vector<double> b(s->k().count(1), 1.0);
  CHECK_THROWS_AS(s->up_solve(0.0, b), Error);
}
