#include "hodge/generators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>

#include "hodge/collapse.hpp"
#include "hodge/error.hpp"

namespace hodge::gen {

RawComplex from_tets(const std::vector<std::pair<VertexId, Point3>>& verts,
                     const std::vector<std::array<VertexId, 4>>& tets) {
  RawComplex raw;
  raw.vertices = verts;
  std::map<std::vector<VertexId>, int> seen1, seen2;
  auto add = [&](std::map<std::vector<VertexId>, int>& seen, int d, std::vector<VertexId> key) {
    if (seen.emplace(key, static_cast<int>(raw.simplices[d].size())).second) raw.simplices[d].push_back(std::move(key));
  };
  for (auto t : tets) {
    std::sort(t.begin(), t.end());
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) add(seen1, 1, {t[a], t[b]});
    for (int skip = 3; skip >= 0; --skip) {
      std::vector<VertexId> f;
      for (int j = 0; j < 4; ++j)
        if (j != skip) f.push_back(t[j]);
      add(seen2, 2, f);
    }
    raw.simplices[3].push_back({t[0], t[1], t[2], t[3]});
  }
  return raw;
}

void set_K_closure(RawComplex& raw, const std::vector<SimplexRef>& top) {
  RawComplex bare = raw;
  bare.in_K.clear();
  bare.collapses.clear();
  auto cx = EmbeddedComplex::build(bare);
  std::array<std::vector<std::uint8_t>, 4> flag;
  for (int d = 0; d <= 3; ++d) flag[d].assign(cx->count(d), 0);
  for (const auto& r : top) flag[r.dim][r.index] = 1;
  for (int d = 3; d >= 1; --d)
    for (std::size_t i = 0; i < cx->count(d); ++i)
      if (flag[d][i])
        for (int f : cx->faces(d, static_cast<int>(i))) flag[d - 1][f] = 1;
  raw.in_K.clear();
  for (int d = 0; d <= 3; ++d)
    for (std::size_t i = 0; i < cx->count(d); ++i)
      if (flag[d][i]) raw.in_K.push_back({d, static_cast<int>(i)});
}

void attach_collapses(RawComplex& raw) {
  RawComplex bare = raw;
  bare.collapses.clear();
  bare.in_K.clear();
  auto cx = EmbeddedComplex::build(bare);
  const auto& x = *cx;
  const int nt = static_cast<int>(x.count(3));
  if (nt == 0) throw Error(ErrorCode::InvalidParams, "shelling needs at least one tetrahedron");

  std::array<std::vector<std::uint8_t>, 4> present;
  for (int d = 0; d <= 3; ++d) present[d].assign(x.count(d), 0);

  // Face of tet t given by a 4-bit mask of its local vertices.
  auto face_of = [&](int t, unsigned mask, int& dim) {
    auto v = x.verts(3, t);
    std::array<int, 4> vi{};
    int m = 0;
    for (int j = 0; j < 4; ++j)
      if (mask & (1u << j)) vi[m++] = v[j];
    dim = m - 1;
    return x.find({vi.data(), static_cast<std::size_t>(m)});
  };

  std::vector<std::vector<CollapsePair>> per_tet;
  std::vector<std::uint8_t> added(nt, 0);
  int n_added = 0;

  auto try_add = [&](int t) -> bool {
    unsigned smask = 0;
    for (int j = 0; j < 4; ++j) {
      int d;
      int f = face_of(t, 0xFu & ~(1u << j), d);
      if (present[2][f]) smask |= 1u << j;
    }
    if (n_added > 0 && smask == 0) return false;
    if (smask == 0xFu) return false;
    for (unsigned m = 1; m < 0xFu; ++m) {
      int d;
      int f = face_of(t, m, d);
      if (present[d][f] && (m & smask) == smask) return false;
    }
    for (unsigned m = 1; m <= 0xFu; ++m) {
      int d;
      int f = face_of(t, m, d);
      present[d][f] = 1;
    }
    unsigned ubit = 0;
    for (int j = 0; j < 4; ++j)
      if (!(smask & (1u << j))) {
        ubit = 1u << j;
        break;
      }
    std::vector<std::pair<unsigned, unsigned>> pairs;
    for (unsigned g = 0; g < 0xFu; ++g) {
      if ((g & smask) != smask || (g & ubit)) continue;
      if (g == 0) continue;
      pairs.emplace_back(g | ubit, g);
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](auto a, auto b) { return std::popcount(a.first) > std::popcount(b.first); });
    std::vector<CollapsePair> out;
    for (auto [hi, lo] : pairs) {
      int dh, dl;
      int ih = face_of(t, hi, dh);
      int il = face_of(t, lo, dl);
      out.push_back({{dh, ih}, {dl, il}});
    }
    per_tet.push_back(std::move(out));
    added[t] = 1;
    ++n_added;
    return true;
  };

  // Passes in index order; tets that are not yet attachable are retried.
  bool progress = true;
  while (n_added < nt && progress) {
    progress = false;
    for (int t = 0; t < nt; ++t)
      if (!added[t] && try_add(t)) progress = true;
  }
  if (n_added < nt) throw Error(ErrorCode::InvalidParams, "greedy shelling failed; X may not be a shellable ball");

  raw.collapses.clear();
  for (auto it = per_tet.rbegin(); it != per_tet.rend(); ++it)
    for (const auto& p : *it) raw.collapses.emplace_back(p.coface, p.face);

  CollapsingSequence seq;
  for (const auto& [a, b] : raw.collapses) seq.pairs.push_back({a, b});
  auto rep = validate(x, seq);
  if (!rep.ok) throw Error(ErrorCode::InvalidParams, "generated collapsing sequence is invalid: " + rep.reason);
}

namespace {

struct Grid {
  int nx, ny, nz;
  VertexId id(int i, int j, int l) const { return i + static_cast<VertexId>(nx + 1) * (j + static_cast<VertexId>(ny + 1) * l); }
};

// Candidate positions for holes/tunnels on odd coordinates.
std::vector<std::pair<int, int>> hole_sites(int nx, int ny, int g) {
  std::vector<std::pair<int, int>> s;
  for (int j = 1; j + 1 < ny; j += 2)
    for (int i = 1; i + 1 < nx; i += 2) s.emplace_back(i, j);
  if (static_cast<int>(s.size()) < g)
    throw Error(ErrorCode::InvalidParams, "box too small for " + std::to_string(g) + " holes");
  s.resize(g);
  return s;
}

int find_tri(const EmbeddedComplex& x, VertexId a, VertexId b, VertexId c) {
  std::array<VertexId, 3> t{a, b, c};
  return x.find_ids(t);
}

}  // namespace

RawComplex grid_box(int nx, int ny, int nz, const KSpec& ks) {
  if (nx < 1 || ny < 1 || nz < 1) throw Error(ErrorCode::InvalidParams, "grid dimensions must be positive");
  Grid g{nx, ny, nz};
  std::vector<std::pair<VertexId, Point3>> verts;
  for (int l = 0; l <= nz; ++l)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        verts.emplace_back(g.id(i, j, l), Point3{double(i), double(j), double(l)});
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<std::array<VertexId, 4>> tets;
  std::vector<std::array<int, 3>> tet_cube;
  for (int l = 0; l < nz; ++l)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (const auto& p : perms) {
          int c[3] = {i, j, l};
          std::array<VertexId, 4> t{};
          t[0] = g.id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            c[p[s]]++;
            t[s + 1] = g.id(c[0], c[1], c[2]);
          }
          std::sort(t.begin(), t.end());
          tets.push_back(t);
          tet_cube.push_back({i, j, l});
        }
  RawComplex raw = from_tets(verts, tets);
  auto cx = EmbeddedComplex::build(raw);
  const auto& x = *cx;

  std::vector<SimplexRef> top;
  std::mt19937_64 rng(ks.seed);
  const int l0 = nz / 2;
  auto sheet = [&](const std::vector<std::pair<int, int>>& holes) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (std::find(holes.begin(), holes.end(), std::make_pair(i, j)) != holes.end()) continue;
        int t1 = find_tri(x, g.id(i, j, l0), g.id(i + 1, j, l0), g.id(i + 1, j + 1, l0));
        int t2 = find_tri(x, g.id(i, j, l0), g.id(i, j + 1, l0), g.id(i + 1, j + 1, l0));
        if (t1 < 0 || t2 < 0) throw Error(ErrorCode::InvalidParams, "sheet triangle missing from grid");
        top.push_back({2, t1});
        top.push_back({2, t2});
      }
  };
  switch (ks.kind) {
    case KKind::Full:
      for (std::size_t t = 0; t < x.count(3); ++t) top.push_back({3, static_cast<int>(t)});
      break;
    case KKind::Disk: sheet({}); break;
    case KKind::PuncturedDisk: sheet(hole_sites(nx, ny, ks.genus)); break;
    case KKind::Tunnels: {
      auto sites = hole_sites(nx, ny, ks.genus);
      for (std::size_t t = 0; t < x.count(3); ++t) {
        std::pair<int, int> col{tet_cube[t][0], tet_cube[t][1]};
        if (std::find(sites.begin(), sites.end(), col) == sites.end()) top.push_back({3, static_cast<int>(t)});
      }
      break;
    }
    case KKind::Sphere:
      for (std::size_t f = 0; f < x.count(2); ++f)
        if (x.cofaces(2, static_cast<int>(f)).size() == 1) top.push_back({2, static_cast<int>(f)});
      break;
    case KKind::Loop: {
      std::array<VertexId, 4> sq{g.id(0, 0, l0), g.id(1, 0, l0), g.id(1, 1, l0), g.id(0, 1, l0)};
      for (int s = 0; s < 4; ++s) {
        std::array<VertexId, 2> e{std::min(sq[s], sq[(s + 1) % 4]), std::max(sq[s], sq[(s + 1) % 4])};
        top.push_back({1, x.find_ids(e)});
      }
      break;
    }
    case KKind::RandomTriangles: {
      std::bernoulli_distribution coin(ks.density);
      for (std::size_t f = 0; f < x.count(2); ++f)
        if (coin(rng)) top.push_back({2, static_cast<int>(f)});
      break;
    }
  }
  set_K_closure(raw, top);
  attach_collapses(raw);
  return raw;
}

RawComplex grid_ball(int k, const KSpec& ks) { return grid_box(k, k, k, ks); }

RawComplex ball(int k, const KSpec& ks) {
  if (k < 1) throw Error(ErrorCode::InvalidParams, "ball needs k >= 1");
  std::vector<std::pair<VertexId, Point3>> verts;
  for (int i = 0; i < k + 3; ++i) {
    double t = i;
    verts.emplace_back(i, Point3{t, t * t, t * t * t});
  }
  std::vector<std::array<VertexId, 4>> tets;
  for (int i = 0; i < k; ++i) tets.push_back({i, i + 1, i + 2, i + 3});
  RawComplex raw = from_tets(verts, tets);
  auto cx = EmbeddedComplex::build(raw);
  std::vector<SimplexRef> top;
  std::mt19937_64 rng(ks.seed);
  switch (ks.kind) {
    case KKind::Sphere:
      for (std::size_t f = 0; f < cx->count(2); ++f)
        if (cx->cofaces(2, static_cast<int>(f)).size() == 1) top.push_back({2, static_cast<int>(f)});
      break;
    case KKind::RandomTriangles: {
      std::bernoulli_distribution coin(ks.density);
      for (std::size_t f = 0; f < cx->count(2); ++f)
        if (coin(rng)) top.push_back({2, static_cast<int>(f)});
      break;
    }
    case KKind::Loop: {
      // boundary of triangle {0,1,2}
      for (auto e : {std::array<VertexId, 2>{0, 1}, {1, 2}, {0, 2}}) top.push_back({1, cx->find_ids(e)});
      break;
    }
    default:
      for (std::size_t t = 0; t < cx->count(3); ++t) top.push_back({3, static_cast<int>(t)});
  }
  set_K_closure(raw, top);
  attach_collapses(raw);
  return raw;
}

RawComplex punctured_disk(int g) {
  if (g < 0) throw Error(ErrorCode::InvalidParams, "genus must be non-negative");
  int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(double(std::max(g, 1))))));
  int side = 2 * cols + 1;
  int rows = g == 0 ? 1 : (g + cols - 1) / cols;
  KSpec ks{g == 0 ? KKind::Disk : KKind::PuncturedDisk, g, 0.5, 1};
  return grid_box(side, std::max(2 * rows + 1, 2), 2, ks);
}

RawComplex annulus_in_ball(int size) {
  return grid_box(std::max(size, 3), std::max(size, 3), std::max(size, 2), KSpec{KKind::PuncturedDisk, 1, 0.5, 1});
}

RawComplex generate(const std::string& kind, int size, int genus, std::uint64_t seed) {
  if (size < 1) throw Error(ErrorCode::InvalidParams, "size must be positive");
  if (kind == "ball") return ball(size, KSpec{KKind::RandomTriangles, 0, 0.5, seed});
  if (kind == "grid_ball")
    return grid_ball(size, genus > 0 ? KSpec{KKind::Tunnels, genus, 0.5, seed} : KSpec{KKind::Full, 0, 0.5, seed});
  if (kind == "punctured_disk") return punctured_disk(genus);
  if (kind == "annulus_in_ball") return annulus_in_ball(size);
  throw Error(ErrorCode::InvalidParams, "unknown generator kind '" + kind + "'");
}

}  // namespace hodge::gen
