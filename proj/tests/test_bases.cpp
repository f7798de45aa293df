#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hodge/bases.hpp"
#include "hodge/error.hpp"
#include "hodge/oracle.hpp"

using namespace hodge;

namespace {

struct Setup {
  ComplexPtr cx;
  Scope x, k;
  TConstruction t;
  FillPlan fill;
  SqueezeOp squeeze;
  CohomologyOperator c;
  explicit Setup(const RawComplex& raw)
      : cx(EmbeddedComplex::build(raw)),
        x(Scope::full(cx)),
        k(Scope::subcomplex_K(cx)),
        t(build_T(x, build_dual_graph(x))),
        fill(x, normalize(*cx, CollapsingSequence::from_complex(*cx))),
        squeeze(x, t.T, t.order),
        c(k, fill, squeeze) {}
};

void check_homology(const Scope& k, const BasisSet& b) {
  CHECK(static_cast<int>(b.size()) == oracle::betti(k, 1, 8000));
  oracle::HodgeOracle o(k, 8000);
  oracle::Mat h(k.count(1), b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (double v : b.chains[i]) CHECK((v == 0.0 || v == 1.0 || v == -1.0));
    auto bd = k.boundary(1).apply(b.chains[i]);
    for (double v : bd) CHECK(v == 0.0);
    h.col(i) = o.P_hr * oracle::to_vec(b.chains[i]);
  }
  if (b.size() > 0) CHECK(oracle::rank(h) == static_cast<int>(b.size()));
}

}  // namespace

TEST_CASE("homology basis examples") {
  auto disk = EmbeddedComplex::build(gen::grid_box(3, 3, 2, {gen::KKind::Disk}));
  CHECK(homology_basis(Scope::subcomplex_K(disk)).size() == 0);

  Setup ann(gen::annulus_in_ball(3));
  auto g = homology_basis(ann.k);
  REQUIRE(g.size() == 1);
  check_homology(ann.k, g);

  for (int genus : {2, 3}) {
    auto cx = EmbeddedComplex::build(gen::punctured_disk(genus));
    Scope k = Scope::subcomplex_K(cx);
    auto b = homology_basis(k);
    CHECK(b.size() == static_cast<std::size_t>(genus));
    check_homology(k, b);
  }
  for (auto raw : {gen::grid_box(4, 3, 3, {gen::KKind::Tunnels, 1}), gen::grid_box(5, 5, 3, {gen::KKind::Tunnels, 2}),
                   gen::grid_box(3, 3, 3, {gen::KKind::Sphere}), gen::grid_box(3, 3, 3, {gen::KKind::Loop}),
                   gen::ball(10, {gen::KKind::RandomTriangles, 0, 0.4, 3})}) {
    auto cx = EmbeddedComplex::build(raw);
    Scope k = Scope::subcomplex_K(cx);
    check_homology(k, homology_basis(k));
  }
}

TEST_CASE("cohomology basis pairs with the homology basis") {
  for (auto raw : {gen::annulus_in_ball(3), gen::punctured_disk(2), gen::grid_box(5, 5, 3, {gen::KKind::Tunnels, 2})}) {
    Setup s(raw);
    auto g = homology_basis(s.k);
    auto p = cohomology_basis(s.c, g);
    REQUIRE(p.size() == g.size());
    oracle::Mat m(p.size(), g.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto cob = s.k.boundary(2).apply_transpose(p.chains[i]);
      for (double v : cob) CHECK(v == 0.0);
      for (std::size_t j = 0; j < g.size(); ++j) m(i, j) = kernels::dot(p.chains[i], g.chains[j]);
    }
    CHECK(std::abs(m.determinant()) >= 0.5);
    // homologous cycles pair identically
    std::mt19937_64 rng(21);
    auto w = fx::random_ints(s.k.count(2), rng);
    auto bw = s.k.boundary(2).apply(w);
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto shifted = g.chains[0];
      for (std::size_t e = 0; e < shifted.size(); ++e) shifted[e] += bw[e];
      CHECK(kernels::dot(p.chains[i], shifted) == doctest::Approx(kernels::dot(p.chains[i], g.chains[0])).epsilon(1e-9));
    }
  }
  Setup disk(gen::grid_box(3, 3, 2, {gen::KKind::Disk}));
  CHECK(cohomology_basis(disk.c, homology_basis(disk.k)).size() == 0);
}

TEST_CASE("witness vectors") {
  std::vector<Vecd> ortho{{1, 0, 0}, {0, 1, 0}};
  auto w = witness(0, ortho);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(std::abs(w[1]) < 1e-14);
  for (double e : {1e-1, 1e-3, 1e-5}) {
    std::vector<Vecd> v{{1, 0}, {1, e}};
    auto wv = witness(0, v);
    CHECK(kernels::norm2(wv) == doctest::Approx(std::sqrt(1 + 1 / (e * e))).epsilon(1e-8));
  }
  CHECK_THROWS_AS(witness(0, std::vector<Vecd>{{1, 2}, {2, 4}}), Error);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  std::vector<Vecd> v(4, Vecd(7));
  for (auto& x : v)
    for (double& a : x) a = nd(rng);
  auto d = span_distances(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    oracle::Mat others(7, 3);
    int col = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (j != i) others.col(col++) = oracle::to_vec(v[j]);
    oracle::Vec vi = oracle::to_vec(v[i]);
    double truth = (vi - oracle::range_projector(others) * vi).norm();
    auto wi = witness(i, v);
    CHECK(kernels::dot(wi, v[i]) == doctest::Approx(1.0));
    CHECK(1.0 / kernels::norm2(wi) <= truth * (1 + 1e-10));
    CHECK(d[i] == doctest::Approx(truth).epsilon(1e-9));
  }
}

TEST_CASE("delta independence of harmonic parts") {
  for (auto raw : {gen::annulus_in_ball(3), gen::punctured_disk(2), gen::punctured_disk(3)}) {
    Setup s(raw);
    auto p = cohomology_basis(s.c, homology_basis(s.k));
    auto rep = delta_independence_report(p, s.k, s.x, 0.1, 0.1);
    CHECK(rep.ok());
    CHECK(rep.min_h_norm >= rep.bound);
    CHECK(rep.delta_measured >= rep.bound);
    CHECK(rep.sigma_min <= rep.delta_measured + 1e-12);
    CHECK(rep.delta_measured <= std::sqrt(double(rep.beta)) * rep.sigma_min + 1e-12);
    if (rep.beta == 1) CHECK(rep.delta_measured == doctest::Approx(1.0));
  }
}

TEST_CASE("stacked determinant bound") {
  auto cx = EmbeddedComplex::build(gen::annulus_in_ball(3));
  auto rep = det_bound_check(Scope::full(cx), 300, 9);
  CHECK(rep.trials > 100);
  CHECK(rep.violations == 0);
  CHECK(rep.worst_ratio <= 1.0);
}
