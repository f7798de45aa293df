#include "hodge/embedding.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "hodge/error.hpp"
#include "hodge/oracle.hpp"

namespace hodge {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int a) {
    while (p[a] != a) a = p[a] = p[p[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

int orientation(const EmbeddedComplex& cx, const std::array<int, 4>& v) {
  const auto& p0 = cx.position(v[0]);
  double m[3][3];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m[r][c] = cx.position(v[r + 1])[c] - p0[c];
  double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (det == 0.0) throw Error(ErrorCode::InvalidInput, "degenerate (flat) tetrahedron in the embedding");
  return det > 0 ? 1 : -1;
}

struct Side {
  int tet;
  int sign;
};

}  // namespace

DualGraph build_dual_graph(const Scope& scope) {
  const auto& cx = scope.complex();
  const bool explicit_amb = cx.has_ambient();
  std::vector<std::array<int, 4>> amb;
  std::vector<int> amb_to_x;
  if (explicit_amb) {
    amb = cx.ambient();
    for (const auto& t : amb) amb_to_x.push_back(cx.find(t));
  } else {
    if (cx.count(3) == 0) throw Error(ErrorCode::NoAmbient, "X has no tetrahedra and no ambient triangulation");
    for (std::size_t t = 0; t < cx.count(3); ++t) {
      auto v = cx.verts(3, static_cast<int>(t));
      amb.push_back({v[0], v[1], v[2], v[3]});
      amb_to_x.push_back(static_cast<int>(t));
    }
  }
  const int m = static_cast<int>(amb.size());

  // Ambient triangles: X triangles keep their index; others get ids after them.
  // At most two sides are kept per triangle; n counts all of them.
  struct Sides {
    std::array<Side, 2> s;
    int n = 0;
  };
  const int nx2 = static_cast<int>(cx.count(2));
  std::vector<Sides> sides(nx2);
  std::unordered_map<std::array<int, 4>, int, ArrayHash> extra;
  for (int a = 0; a < m; ++a) {
    const int o = orientation(cx, amb[a]);
    for (int j = 0; j < 4; ++j) {
      int id;
      if (!explicit_amb) {
        id = cx.faces(3, amb_to_x[a])[j];  // facet j omits vertex j
      } else {
        std::array<int, 4> f{-1, -1, -1, -1};
        int q = 0;
        for (int k = 0; k < 4; ++k)
          if (k != j) f[q++] = amb[a][k];
        id = cx.find({f.data(), 3});
        if (id < 0) {
          auto [it, fresh] = extra.emplace(f, nx2 + static_cast<int>(extra.size()));
          id = it->second;
          if (fresh) sides.emplace_back();
        }
      }
      auto& sd = sides[id];
      if (sd.n < 2) sd.s[sd.n] = {a, (j % 2 == 0) ? o : -o};
      sd.n++;
    }
  }
  for (int id = 0; id < static_cast<int>(sides.size()); ++id) {
    if (sides[id].n > 2)
      throw Error(explicit_amb ? ErrorCode::InvalidInput : ErrorCode::NoAmbient,
                  "a triangle bounds more than two tetrahedra");
    if (id < nx2 && sides[id].n == 0 && (!explicit_amb || scope.contains(2, id)))
      throw Error(ErrorCode::NoAmbient, "triangle " + std::to_string(id) + " is not a facet of any ambient tetrahedron");
    if (sides[id].n == 2 && sides[id].s[0].sign == sides[id].s[1].sign)
      throw Error(ErrorCode::InvalidInput, "tetrahedra on a shared triangle overlap (inconsistent embedding)");
  }

  const int outer_raw = m;
  UnionFind uf(m + 1);
  for (int id = 0; id < static_cast<int>(sides.size()); ++id) {
    const bool scoped = id < nx2 && scope.contains(2, id);
    if (scoped || sides[id].n == 0) continue;
    int a = sides[id].s[0].tet;
    int b = sides[id].n == 2 ? sides[id].s[1].tet : outer_raw;
    uf.unite(a, b);
  }

  DualGraph g;
  g.scope = scope.tag();
  std::vector<int> comp(m + 1, -1);
  for (int a = 0; a <= m; ++a) {
    int r = uf.find(a);
    if (comp[r] < 0) comp[r] = g.num_nodes++;
    comp[a] = comp[r];
  }
  g.outer = comp[outer_raw];
  g.node_of_ambient.assign(comp.begin(), comp.begin() + m);
  g.ambient_to_x = amb_to_x;
  std::vector<int> members(g.num_nodes, 0);
  for (int a = 0; a <= m; ++a) members[comp[a]]++;
  g.x_tet_of_node.assign(g.num_nodes, -1);
  for (int a = 0; a < m; ++a)
    if (members[comp[a]] == 1 && amb_to_x[a] >= 0) g.x_tet_of_node[comp[a]] = amb_to_x[a];

  UnionFind conn(g.num_nodes);
  for (int tri : scope.globals(2)) {
    const auto& s = sides[tri];
    int a = comp[s.s[0].tet], sa = s.s[0].sign;
    int b = s.n == 2 ? comp[s.s[1].tet] : g.outer;
    DualEdge e;
    e.triangle = tri;
    if (sa > 0) {
      e.head = a;
      e.tail = b;
    } else {
      e.head = b;
      e.tail = a;
    }
    g.edges.push_back(e);
    conn.unite(a, b);
  }
  for (int v = 0; v < g.num_nodes; ++v)
    if (conn.find(v) != conn.find(0)) g.connected = false;
  return g;
}

namespace {

// BFS forest over the given dual edges; roots: outer node first, then
// unvisited nodes in index order. Returns (edge, child node) in discovery order.
std::vector<std::pair<int, int>> bfs_forest(const DualGraph& g, const std::vector<int>& edge_ids,
                                            std::vector<int>* non_tree) {
  std::vector<int> start(g.num_nodes + 1, 0);
  for (int e : edge_ids) {
    const auto& de = g.edges[e];
    start[de.tail + 1]++;
    if (de.head != de.tail) start[de.head + 1]++;
  }
  for (int v = 0; v < g.num_nodes; ++v) start[v + 1] += start[v];
  std::vector<std::pair<int, int>> adj(start.back());
  {
    std::vector<int> pos(start.begin(), start.end() - 1);
    for (int e : edge_ids) {
      const auto& de = g.edges[e];
      adj[pos[de.tail]++] = {e, de.head};
      if (de.head != de.tail) adj[pos[de.head]++] = {e, de.tail};
    }
  }
  std::vector<std::uint8_t> seen(g.num_nodes, 0), used(g.edges.size(), 0);
  std::vector<std::pair<int, int>> out;
  auto run = [&](int root) {
    std::deque<int> q{root};
    seen[root] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int k = start[v]; k < start[v + 1]; ++k) {
        auto [e, w] = adj[k];
        if (used[e]) continue;
        used[e] = 1;
        if (seen[w]) {
          if (non_tree) non_tree->push_back(e);
          continue;
        }
        seen[w] = 1;
        out.emplace_back(e, w);
        q.push_back(w);
      }
    }
  };
  run(g.outer);
  for (int v = 0; v < g.num_nodes; ++v)
    if (!seen[v]) run(v);
  return out;
}

}  // namespace

TConstruction build_T(const Scope& x_scope, const DualGraph& dual_x, const BuildTOptions& opt) {
  if (x_scope.tag() != ScopeTag::X || dual_x.scope != ScopeTag::X)
    throw Error(ErrorCode::ScopeMismatch, "build_T needs X and the dual graph of X");
  const auto& cx = x_scope.complex();
  std::vector<int> eligible;
  for (std::size_t j = 0; j < dual_x.edges.size(); ++j)
    if (!cx.in_K(2, dual_x.edges[j].triangle)) eligible.push_back(static_cast<int>(j));
  auto tree = bfs_forest(dual_x, eligible, nullptr);

  Scope::Membership mem;
  for (int d = 0; d <= 3; ++d) mem[d].assign(cx.count(d), d <= 1 ? 1 : 0);
  mem[2].assign(cx.count(2), 1);
  mem[3] = cx.k_flags(3);
  std::vector<int> removed;
  for (auto [e, child] : tree) {
    if (dual_x.x_tet_of_node[child] < 0)
      throw Error(ErrorCode::SpanningTreeBlocked,
                  "dual spanning tree reaches a volume that is not a tetrahedron of X");
    removed.push_back(dual_x.edges[e].triangle);
    mem[2][dual_x.edges[e].triangle] = 0;
  }
  TConstruction out{Scope(x_scope.complex_ptr(), ScopeTag::T, std::move(mem)), removed, {}, -1, -1};
  out.order = squeeze_order(x_scope, out.T);

  if (opt.verify_h2 && cx.total() <= opt.dense_cap) {
    Scope k = Scope::subcomplex_K(x_scope.complex_ptr());
    out.beta2_K = oracle::betti(k, 2, opt.dense_cap);
    out.beta2_T = oracle::betti(out.T, 2, opt.dense_cap);
    if (out.beta2_K != out.beta2_T)
      throw Error(ErrorCode::H2Mismatch, "beta_2(T) = " + std::to_string(out.beta2_T) +
                                             " but beta_2(K) = " + std::to_string(out.beta2_K));
  }
  return out;
}

std::vector<SqueezeStep> squeeze_order(const Scope& x_scope, const Scope& t_scope) {
  const auto& cx = x_scope.complex();
  if (&cx != &t_scope.complex()) throw Error(ErrorCode::ScopeMismatch, "T is not a scope over X");
  DualGraph g = build_dual_graph(x_scope);
  std::vector<int> d_edges;
  for (std::size_t j = 0; j < g.edges.size(); ++j)
    if (!t_scope.contains(2, g.edges[j].triangle)) d_edges.push_back(static_cast<int>(j));
  std::vector<int> cyc;
  auto tree = bfs_forest(g, d_edges, &cyc);
  if (!cyc.empty())
    throw Error(ErrorCode::OrderInfeasible, "removed triangles contain a closed dual cycle (triangle " +
                                                std::to_string(g.edges[cyc.front()].triangle) + ")");
  std::vector<SqueezeStep> order;
  for (auto [e, child] : tree) {
    int tet = g.x_tet_of_node[child];
    if (tet < 0 || t_scope.contains(3, tet))
      throw Error(ErrorCode::OrderInfeasible, "no removable tetrahedron for triangle " + std::to_string(g.edges[e].triangle));
    order.push_back({g.edges[e].triangle, tet});
  }
  return order;
}

}  // namespace hodge
