#include "hodge/complex.hpp"

#include <algorithm>

#include "hodge/error.hpp"

namespace hodge {

std::string to_string(ScopeTag s) {
  switch (s) {
    case ScopeTag::X: return "X";
    case ScopeTag::K: return "K";
    case ScopeTag::T: return "T";
  }
  return "?";
}

ScopeTag scope_from_string(const std::string& s) {
  if (s == "X") return ScopeTag::X;
  if (s == "K") return ScopeTag::K;
  if (s == "T") return ScopeTag::T;
  throw Error(ErrorCode::InvalidInput, "unknown scope tag '" + s + "'");
}

namespace {

std::array<int, 4> key_of(std::span<const int> v) {
  std::array<int, 4> k{-1, -1, -1, -1};
  std::copy(v.begin(), v.end(), k.begin());
  std::sort(k.begin(), k.begin() + v.size());
  return k;
}

std::string tuple_str(std::span<const VertexId> t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + "]";
}

}  // namespace

int EmbeddedComplex::top_dim() const {
  for (int d = 3; d >= 0; --d)
    if (counts_[d] > 0) return d;
  return -1;
}

int EmbeddedComplex::vertex_index(VertexId id) const {
  auto it = id_to_index_.find(id);
  return it == id_to_index_.end() ? -1 : it->second;
}

int EmbeddedComplex::find(std::span<const int> vi) const {
  if (vi.empty() || vi.size() > 4) return -1;
  const int d = static_cast<int>(vi.size()) - 1;
  auto it = lookup_[d].find(key_of(vi));
  return it == lookup_[d].end() ? -1 : it->second;
}

int EmbeddedComplex::find_ids(std::span<const VertexId> ids) const {
  std::vector<int> vi;
  for (VertexId id : ids) {
    int v = vertex_index(id);
    if (v < 0) return -1;
    vi.push_back(v);
  }
  return find(vi);
}

std::size_t EmbeddedComplex::k_count(int d) const {
  return static_cast<std::size_t>(std::count(k_[d].begin(), k_[d].end(), std::uint8_t{1}));
}

std::shared_ptr<const EmbeddedComplex> EmbeddedComplex::build(const RawComplex& raw) {
  auto cx = std::make_shared<EmbeddedComplex>();
  auto& c = *cx;

  c.counts_[0] = raw.vertices.size();
  c.ids_.reserve(raw.vertices.size());
  for (std::size_t i = 0; i < raw.vertices.size(); ++i) {
    const auto& [id, p] = raw.vertices[i];
    if (!c.id_to_index_.emplace(id, static_cast<int>(i)).second)
      throw Error(ErrorCode::DuplicateSimplex, "vertex id " + std::to_string(id) + " listed twice");
    c.ids_.push_back(id);
    c.pos_.push_back(p);
    c.verts_[0].push_back(static_cast<int>(i));
    c.lookup_[0].emplace(std::array<int, 4>{static_cast<int>(i), -1, -1, -1}, static_cast<int>(i));
  }

  for (int d = 1; d <= 3; ++d) {
    const auto& list = raw.simplices[d];
    c.counts_[d] = list.size();
    c.verts_[d].reserve(list.size() * (d + 1));
    c.lookup_[d].reserve(list.size() * 2);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& t = list[i];
      if (static_cast<int>(t.size()) != d + 1)
        throw Error(ErrorCode::InvalidInput, "simplex " + tuple_str(t) + " listed under dimension " + std::to_string(d));
      std::array<int, 4> vi{-1, -1, -1, -1};
      for (int j = 0; j <= d; ++j) {
        if (j > 0 && !(t[j - 1] < t[j])) throw Error(ErrorCode::NonSortedTuple, "simplex " + tuple_str(t));
        vi[j] = c.vertex_index(t[j]);
        if (vi[j] < 0)
          throw Error(ErrorCode::MissingFace, "vertex " + std::to_string(t[j]) + " of " + tuple_str(t) + " not listed");
      }
      for (int j = 0; j <= d; ++j) c.verts_[d].push_back(vi[j]);
      if (!c.lookup_[d].emplace(key_of({vi.data(), static_cast<std::size_t>(d + 1)}), static_cast<int>(i)).second)
        throw Error(ErrorCode::DuplicateSimplex, "simplex " + tuple_str(t) + " listed twice");
    }
  }

  for (int d = 1; d <= 3; ++d) {
    const std::size_t n = c.counts_[d];
    c.faces_[d].resize(n * (d + 1));
    std::array<int, 4> f{};
    for (std::size_t i = 0; i < n; ++i) {
      auto v = c.verts(d, static_cast<int>(i));
      for (int j = 0; j <= d; ++j) {
        int m = 0;
        for (int k = 0; k <= d; ++k)
          if (k != j) f[m++] = v[k];
        int idx = c.find({f.data(), static_cast<std::size_t>(d)});
        if (idx < 0) {
          std::vector<VertexId> t;
          for (int k = 0; k <= d; ++k) t.push_back(c.ids_[v[k]]);
          throw Error(ErrorCode::MissingFace, "a facet of " + tuple_str(t) + " is not listed");
        }
        c.faces_[d][i * (d + 1) + j] = idx;
      }
    }
  }

  for (int d = 0; d <= 2; ++d) {
    auto& ptr = c.cof_ptr_[d];
    auto& idx = c.cof_idx_[d];
    ptr.assign(c.counts_[d] + 1, 0);
    for (int f : c.faces_[d + 1]) ptr[f + 1]++;
    for (std::size_t i = 0; i < c.counts_[d]; ++i) ptr[i + 1] += ptr[i];
    idx.resize(c.faces_[d + 1].size());
    std::vector<int> next(ptr.begin(), ptr.end() - 1);
    for (std::size_t s = 0; s < c.counts_[d + 1]; ++s)
      for (int f : c.faces(d + 1, static_cast<int>(s))) idx[next[f]++] = static_cast<int>(s);
  }

  for (int d = 0; d <= 3; ++d) c.k_[d].assign(c.counts_[d], 0);
  for (const auto& r : raw.in_K) {
    if (r.dim < 0 || r.dim > 3 || r.index < 0 || static_cast<std::size_t>(r.index) >= c.counts_[r.dim])
      throw Error(ErrorCode::InvalidInput,
                  "in_K reference (" + std::to_string(r.dim) + "," + std::to_string(r.index) + ") out of range");
    c.k_[r.dim][r.index] = 1;
  }
  for (int d = 1; d <= 3; ++d)
    for (std::size_t i = 0; i < c.counts_[d]; ++i)
      if (c.k_[d][i])
        for (int f : c.faces(d, static_cast<int>(i)))
          if (!c.k_[d - 1][f])
            throw Error(ErrorCode::KNotFaceClosed,
                        "simplex (" + std::to_string(d) + "," + std::to_string(i) + ") in K has a facet outside K");

  if (raw.ambient_tets) {
    std::vector<std::array<int, 4>> amb;
    amb.reserve(raw.ambient_tets->size());
    for (const auto& t : *raw.ambient_tets) {
      std::array<VertexId, 4> s = t;
      std::sort(s.begin(), s.end());
      std::array<int, 4> a{};
      for (int j = 0; j < 4; ++j) {
        if (j > 0 && s[j] == s[j - 1]) throw Error(ErrorCode::InvalidInput, "degenerate ambient tetrahedron");
        a[j] = c.vertex_index(s[j]);
        if (a[j] < 0) throw Error(ErrorCode::InvalidInput, "ambient tetrahedron uses an unknown vertex");
      }
      amb.push_back(a);
    }
    c.ambient_ = std::move(amb);
  }

  for (const auto& [sg, tau] : raw.collapses) {
    for (const auto& r : {sg, tau})
      if (r.dim < 0 || r.dim > 3 || r.index < 0 || static_cast<std::size_t>(r.index) >= c.counts_[r.dim])
        throw Error(ErrorCode::InvalidInput, "collapse pair references a missing simplex");
  }
  c.collapses_ = raw.collapses;
  return cx;
}

RawComplex EmbeddedComplex::to_raw() const {
  RawComplex r;
  for (std::size_t i = 0; i < counts_[0]; ++i) r.vertices.emplace_back(ids_[i], pos_[i]);
  for (int d = 1; d <= 3; ++d)
    for (std::size_t i = 0; i < counts_[d]; ++i) {
      std::vector<VertexId> t;
      for (int v : verts(d, static_cast<int>(i))) t.push_back(ids_[v]);
      r.simplices[d].push_back(std::move(t));
    }
  for (int d = 0; d <= 3; ++d)
    for (std::size_t i = 0; i < counts_[d]; ++i)
      if (k_[d][i]) r.in_K.push_back({d, static_cast<int>(i)});
  r.collapses = collapses_;
  if (ambient_) {
    std::vector<std::array<VertexId, 4>> a;
    for (const auto& t : *ambient_) a.push_back({ids_[t[0]], ids_[t[1]], ids_[t[2]], ids_[t[3]]});
    r.ambient_tets = std::move(a);
  }
  return r;
}

// ---------------------------------------------------------------------------

BoundaryOp::BoundaryOp(int d, ScopeTag scope, kernels::Csr mat)
    : dim_(d), scope_(scope), fwd_(std::move(mat)), adj_(kernels::transpose(fwd_)) {}

std::vector<double> BoundaryOp::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols())
    throw Error(ErrorCode::ScopeMismatch, "boundary apply: chain length does not match the scope");
  return kernels::spmv(fwd_, x);
}

std::vector<double> BoundaryOp::apply_transpose(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != rows())
    throw Error(ErrorCode::ScopeMismatch, "boundary apply_transpose: chain length does not match the scope");
  return kernels::spmv(adj_, y);
}

Chain BoundaryOp::apply(const Chain& x) const {
  if (x.dim != dim_ || x.scope != scope_)
    throw Error(ErrorCode::ScopeMismatch, "chain dim/scope does not match boundary operator");
  return Chain{dim_ - 1, scope_, apply(std::span<const double>(x.values))};
}

Chain BoundaryOp::apply_transpose(const Chain& y) const {
  if (y.dim != dim_ - 1 || y.scope != scope_)
    throw Error(ErrorCode::ScopeMismatch, "chain dim/scope does not match coboundary operator");
  return Chain{dim_, scope_, apply_transpose(std::span<const double>(y.values))};
}

// ---------------------------------------------------------------------------

Scope::Scope(ComplexPtr cx, ScopeTag tag, Membership member)
    : cx_(std::move(cx)), tag_(tag), member_(std::move(member)) {
  const auto& c = *cx_;
  for (int d = 0; d <= 3; ++d) {
    if (member_[d].size() != c.count(d)) throw Error(ErrorCode::ScopeMismatch, "membership size mismatch");
    g2l_[d].assign(c.count(d), -1);
    for (std::size_t i = 0; i < c.count(d); ++i)
      if (member_[d][i]) {
        g2l_[d][i] = static_cast<int>(l2g_[d].size());
        l2g_[d].push_back(static_cast<int>(i));
      }
  }
  for (int d = 1; d <= 3; ++d) {
    std::vector<kernels::Triplet> trip;
    trip.reserve(l2g_[d].size() * (d + 1));
    for (std::size_t l = 0; l < l2g_[d].size(); ++l) {
      auto f = c.faces(d, l2g_[d][l]);
      for (int j = 0; j <= d; ++j) {
        int r = g2l_[d - 1][f[j]];
        if (r < 0) throw Error(ErrorCode::ScopeMismatch, "scope " + to_string(tag_) + " is not face-closed");
        trip.push_back({r, static_cast<int>(l), (j % 2 == 0) ? 1.0 : -1.0});
      }
    }
    bd_[d - 1] = BoundaryOp(d, tag_,
                            kernels::csr_from_triplets(static_cast<int>(l2g_[d - 1].size()),
                                                       static_cast<int>(l2g_[d].size()), std::move(trip)));
  }
}

Scope Scope::full(ComplexPtr cx) {
  Membership m;
  for (int d = 0; d <= 3; ++d) m[d].assign(cx->count(d), 1);
  return Scope(std::move(cx), ScopeTag::X, std::move(m));
}

Scope Scope::subcomplex_K(ComplexPtr cx) {
  Membership m;
  for (int d = 0; d <= 3; ++d) m[d] = cx->k_flags(d);
  return Scope(std::move(cx), ScopeTag::K, std::move(m));
}

const BoundaryOp& Scope::boundary(int d) const {
  if (d < 1 || d > 3) throw Error(ErrorCode::DimOutOfRange, "boundary dimension " + std::to_string(d));
  return bd_[d - 1];
}

std::vector<double> Scope::extend(int d, std::span<const double> local) const {
  if (local.size() != count(d)) throw Error(ErrorCode::ScopeMismatch, "extend: length mismatch");
  std::vector<double> g(cx_->count(d), 0.0);
  for (std::size_t l = 0; l < local.size(); ++l) g[l2g_[d][l]] = local[l];
  return g;
}

std::vector<double> Scope::restrict(int d, std::span<const double> global) const {
  if (global.size() != cx_->count(d)) throw Error(ErrorCode::ScopeMismatch, "restrict: length mismatch");
  std::vector<double> l(count(d));
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = global[l2g_[d][i]];
  return l;
}

// ---------------------------------------------------------------------------

std::vector<double> laplacian_apply(const Scope& s, Laplacian which, std::span<const double> x) {
  switch (which) {
    case Laplacian::L0: {
      const auto& b1 = s.boundary(1);
      return b1.apply(b1.apply_transpose(x));
    }
    case Laplacian::L1Up: {
      const auto& b2 = s.boundary(2);
      return b2.apply(b2.apply_transpose(x));
    }
    case Laplacian::L1Down: {
      const auto& b1 = s.boundary(1);
      return b1.apply_transpose(b1.apply(x));
    }
    case Laplacian::L1: {
      auto up = laplacian_apply(s, Laplacian::L1Up, x);
      auto down = laplacian_apply(s, Laplacian::L1Down, x);
      for (std::size_t i = 0; i < up.size(); ++i) up[i] += down[i];
      return up;
    }
  }
  return {};
}

Chain laplacian_apply(const Scope& s, Laplacian which, const Chain& x) {
  const int want = which == Laplacian::L0 ? 0 : 1;
  if (x.dim != want || x.scope != s.tag() || x.values.size() != s.count(want))
    throw Error(ErrorCode::ScopeMismatch, "laplacian_apply: chain does not match dimension/scope");
  return Chain{want, s.tag(), laplacian_apply(s, which, std::span<const double>(x.values))};
}

}  // namespace hodge
