#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hodge/error.hpp"
#include "hodge/oracle.hpp"

using namespace hodge;
using oracle::Mat;
using oracle::Vec;

namespace {

Scope k_of(const RawComplex& raw) { return Scope::subcomplex_K(EmbeddedComplex::build(raw)); }

}  // namespace

TEST_CASE("pseudoinverse axioms") {
  Scope k = k_of(gen::annulus_in_ball(3));
  oracle::HodgeOracle o(k);
  const Mat& a = o.L1;
  const Mat& p = o.L1_pinv;
  CHECK((a * p * a - a).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((p * a * p - p).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(((a * p).transpose() - a * p).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(((p * a).transpose() - p * a).cwiseAbs().maxCoeff() <= 1e-9);

  Mat r = Mat::Random(5, 3);
  Mat rp = oracle::pinv(r);
  CHECK((rp * r - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pseudoinverse additivity") {
  for (auto raw : {gen::annulus_in_ball(3), gen::punctured_disk(2), gen::grid_box(2, 2, 2, {gen::KKind::Full})}) {
    Scope k = k_of(raw);
    oracle::HodgeOracle o(k);
    CHECK((o.L1_up.transpose() * o.L1_down).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((o.L1_pinv - o.L1_up_pinv - o.L1_down_pinv).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("exact_hodge examples") {
  Scope k = k_of(gen::annulus_in_ball(3));
  std::mt19937_64 rng(3);
  auto w = fx::random_ints(k.count(2), rng);
  Vec bw = oracle::to_vec(k.boundary(2).apply(w));
  auto p = oracle::exact_hodge(k, bw);
  CHECK((p.bd - bw).norm() <= 1e-10 * bw.norm());
  CHECK(p.hr.norm() <= 1e-10 * bw.norm());
  CHECK(p.cbd.norm() <= 1e-10 * bw.norm());

  auto f = fx::random_ints(k.count(0), rng);
  Vec cf = oracle::to_vec(k.boundary(1).apply_transpose(f));
  p = oracle::exact_hodge(k, cf);
  CHECK((p.cbd - cf).norm() <= 1e-10 * cf.norm());
  CHECK(p.bd.norm() <= 1e-10 * cf.norm());
  CHECK(p.hr.norm() <= 1e-10 * cf.norm());

  Vec x = Vec::Random(static_cast<Eigen::Index>(k.count(1)));
  p = oracle::exact_hodge(k, x);
  CHECK((p.bd + p.hr + p.cbd - x).norm() <= 1e-10);
  CHECK(std::abs(p.bd.dot(p.hr)) <= 1e-10);
  CHECK(std::abs(p.bd.dot(p.cbd)) <= 1e-10);
  CHECK(std::abs(p.hr.dot(p.cbd)) <= 1e-10);
  CHECK(p.hr.norm() > 1e-3);

  CHECK_THROWS_AS(oracle::exact_hodge(k, x, 10), Error);
}

TEST_CASE("loewner_check examples") {
  Mat z = Mat::Zero(4, 4), id = Mat::Identity(4, 4);
  auto r = oracle::loewner_check(z, id, 1e-12);
  CHECK(r.ok);
  r = oracle::loewner_check(id, z, 1e-12);
  CHECK_FALSE(r.ok);
  CHECK(r.min_eig == doctest::Approx(-1.0));
  Mat ns = id;
  ns(0, 1) = 1.0;
  CHECK_THROWS_AS(oracle::loewner_check(ns, id, 1e-9), Error);
  try {
    oracle::loewner_check(ns, id, 1e-9);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymmetric);
  }
}

TEST_CASE("betti examples") {
  CHECK(oracle::betti(k_of(gen::annulus_in_ball(3)), 1) == 1);
  CHECK(oracle::betti(k_of(gen::grid_box(3, 3, 2, {gen::KKind::Disk})), 1) == 0);
  CHECK(oracle::betti(k_of(gen::punctured_disk(2)), 1) == 2);
  CHECK(oracle::betti(k_of(fx::tetrahedron({{2, 0}, {2, 1}, {2, 2}, {2, 3}})), 2) == 1);
  CHECK(oracle::betti(k_of(fx::tetrahedron({{2, 0}, {2, 1}, {2, 2}, {2, 3}})), 1) == 0);
  CHECK_THROWS_AS(oracle::betti(k_of(gen::annulus_in_ball(3)), 1, 5), Error);
}

TEST_CASE("ranks agree with exact elimination") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    Mat a(6, 5);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 5; ++j) a(i, j) = d(rng);
    a.col(4) = a.col(0) - 2 * a.col(1);
    CHECK(oracle::rank(a) == oracle::rank_exact(a));
    CHECK(oracle::rank(a) <= 4);
  }
}

TEST_CASE("principal angles and norms") {
  Mat a = Mat::Identity(4, 2);
  auto ang = oracle::principal_angles(a, a);
  for (double x : ang) CHECK(std::abs(x) <= 1e-7);
  Mat b = Mat::Zero(4, 1);
  b(2, 0) = 1;
  ang = oracle::principal_angles(a.leftCols(1), b);
  CHECK(ang[0] == doctest::Approx(M_PI / 2));
  Mat d = Mat::Zero(3, 3);
  d.diagonal() << 1, 0, 4;
  CHECK(oracle::spectral_norm(d) == doctest::Approx(4));
  CHECK(oracle::min_nonzero_eig(d) == doctest::Approx(1));
  CHECK(oracle::max_eig(d) == doctest::Approx(4));
  Mat m = oracle::materialize(3, [&](std::span<const double> x) { return oracle::to_std(d * oracle::to_vec(x)); });
  CHECK((m - d).norm() == 0.0);
}
