#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hodge/error.hpp"
#include "hodge/io.hpp"
#include "hodge/linop.hpp"

using namespace hodge;

namespace {

RawComplex triangle_raw() {
  RawComplex r;
  r.vertices = {{0, {0, 0, 0}}, {1, {1, 0, 0}}, {2, {0, 1, 0}}};
  r.simplices[1] = {{0, 1}, {1, 2}, {0, 2}};
  r.simplices[2] = {{0, 1, 2}};
  return r;
}

ErrorCode code_of(const RawComplex& r) {
  try {
    EmbeddedComplex::build(r);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidInput;  // sentinel: no error thrown
}

}  // namespace

TEST_CASE("single triangle with all faces") {
  auto cx = EmbeddedComplex::build(triangle_raw());
  CHECK(cx->count(0) == 3);
  CHECK(cx->count(1) == 3);
  CHECK(cx->count(2) == 1);
  CHECK(cx->count(3) == 0);
}

TEST_CASE("invalid inputs are rejected") {
  auto r = triangle_raw();
  r.simplices[1].erase(r.simplices[1].begin());
  CHECK(code_of(r) == ErrorCode::MissingFace);

  r = triangle_raw();
  r.simplices[1].push_back({1, 2});
  CHECK(code_of(r) == ErrorCode::DuplicateSimplex);

  r = triangle_raw();
  r.simplices[1][1] = {2, 1};
  CHECK(code_of(r) == ErrorCode::NonSortedTuple);

  r = triangle_raw();
  r.in_K = {{2, 0}, {1, 0}};
  CHECK(code_of(r) == ErrorCode::KNotFaceClosed);
}

TEST_CASE("tetrahedron face counts") {
  auto cx = EmbeddedComplex::build(fx::tetrahedron());
  CHECK(cx->count(0) == 4);
  CHECK(cx->count(1) == 6);
  CHECK(cx->count(2) == 4);
  CHECK(cx->count(3) == 1);
  CHECK(cx->total() == 15);
}

TEST_CASE("boundary signs follow the sorted-vertex convention") {
  auto cx = EmbeddedComplex::build(triangle_raw());
  Scope x = Scope::full(cx);
  // edge {0,2} is index 2
  std::vector<double> e(3, 0.0);
  e[2] = 1.0;
  auto b = x.boundary(1).apply(e);
  CHECK(b == std::vector<double>{-1.0, 0.0, 1.0});
  // ∂{0,1,2} = {1,2} - {0,2} + {0,1}
  auto bt = x.boundary(2).apply(std::vector<double>{1.0});
  CHECK(bt == std::vector<double>{1.0, 1.0, -1.0});
  CHECK(x.boundary(1).apply(bt) == std::vector<double>{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(x.boundary(0), Error);
  CHECK_THROWS_AS(x.boundary(4), Error);
}

TEST_CASE("boundary of boundary vanishes exactly and apply/transpose are adjoint") {
  auto cx = EmbeddedComplex::build(gen::grid_ball(2, {gen::KKind::Full}));
  Scope x = Scope::full(cx);
  std::mt19937_64 rng(4);
  for (int d = 2; d <= 3; ++d) {
    auto c = fx::random_ints(x.count(d), rng);
    auto bb = x.boundary(d - 1).apply(x.boundary(d).apply(c));
    for (double v : bb) CHECK(v == 0.0);
  }
  for (int d = 1; d <= 3; ++d) {
    auto a = fx::random_ints(x.count(d), rng);
    auto b = fx::random_ints(x.count(d - 1), rng);
    auto da = x.boundary(d).apply(a);
    auto dtb = x.boundary(d).apply_transpose(b);
    double l = 0, r = 0;
    for (std::size_t i = 0; i < b.size(); ++i) l += da[i] * b[i];
    for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * dtb[i];
    CHECK(l == r);
  }
}

TEST_CASE("laplacians") {
  auto cx = EmbeddedComplex::build(triangle_raw());
  Scope x = Scope::full(cx);
  Chain t{1, ScopeTag::X, x.boundary(2).apply(std::vector<double>{1.0})};
  auto up = laplacian_apply(x, Laplacian::L1Up, t);
  for (std::size_t i = 0; i < 3; ++i) CHECK(up.values[i] == 3.0 * t.values[i]);
  Chain z = x.zero_chain(1);
  for (double v : laplacian_apply(x, Laplacian::L1, z).values) CHECK(v == 0.0);

  auto cx2 = EmbeddedComplex::build(gen::grid_ball(2, {gen::KKind::Full}));
  Scope x2 = Scope::full(cx2);
  Chain r{1, ScopeTag::X, random_vector(x2.count(1), 9)};
  auto l = laplacian_apply(x2, Laplacian::L1, r).values;
  auto u = laplacian_apply(x2, Laplacian::L1Up, r).values;
  auto d = laplacian_apply(x2, Laplacian::L1Down, r).values;
  for (std::size_t i = 0; i < l.size(); ++i) CHECK(l[i] == doctest::Approx(u[i] + d[i]).epsilon(1e-12));
  Chain wrong{1, ScopeTag::K, r.values};
  CHECK_THROWS_AS(laplacian_apply(x2, Laplacian::L1, wrong), Error);
}

TEST_CASE("lambda_max of L1 up stays below 3 n2") {
  for (auto raw : {gen::grid_ball(2, {gen::KKind::Full}), gen::ball(6, {gen::KKind::Full}), fx::tetrahedron()}) {
    auto cx = EmbeddedComplex::build(raw);
    Scope x = Scope::full(cx);
    double lam = power_max_eig(static_cast<int>(x.count(1)),
                               [&](std::span<const double> v) { return laplacian_apply(x, Laplacian::L1Up, v); }, 300);
    CHECK(lam <= 3.0 * x.count(2));
  }
}

TEST_CASE("scx round trip keeps the dense order") {
  auto raw = gen::annulus_in_ball(3);
  auto text = io::dump_scx(raw);
  auto back = io::parse_scx(text);
  auto a = EmbeddedComplex::build(raw), b = EmbeddedComplex::build(back);
  for (int d = 0; d <= 3; ++d) {
    REQUIRE(a->count(d) == b->count(d));
    CHECK(a->k_flags(d) == b->k_flags(d));
  }
  CHECK(a->collapses() == b->collapses());
  Chain c{1, ScopeTag::K, {1.5, -2.0}};
  auto c2 = io::parse_chain(io::dump_chain(c));
  CHECK(c2.values == c.values);
  CHECK(c2.scope == ScopeTag::K);
  CHECK_THROWS_AS(io::parse_scx("{not json"), Error);
}
