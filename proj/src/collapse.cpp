#include "hodge/collapse.hpp"

#include <algorithm>
#include <array>

#include "hodge/error.hpp"

namespace hodge {

CollapsingSequence CollapsingSequence::from_complex(const EmbeddedComplex& x) {
  CollapsingSequence s;
  for (const auto& [a, b] : x.collapses()) s.pairs.push_back({a, b});
  return s;
}

namespace {

// Alive flags and live coface counts; removal of a free pair.
struct Sim {
  const EmbeddedComplex& x;
  std::array<std::vector<std::uint8_t>, 4> alive;
  std::array<std::vector<int>, 4> live_cof;
  std::size_t remaining = 0;

  explicit Sim(const EmbeddedComplex& cx) : x(cx) {
    for (int d = 0; d <= 3; ++d) {
      alive[d].assign(x.count(d), 1);
      live_cof[d].assign(x.count(d), 0);
      remaining += x.count(d);
    }
    for (int d = 1; d <= 3; ++d)
      for (std::size_t i = 0; i < x.count(d); ++i)
        for (int f : x.faces(d, static_cast<int>(i))) live_cof[d - 1][f]++;
  }

  // Empty string when the pair is a legal collapse in the current state.
  std::string check(const CollapsePair& p) const {
    const auto& s = p.coface;
    const auto& t = p.face;
    if (s.dim < 1 || s.dim > 3 || t.dim != s.dim - 1) return "dimensions are not (d, d-1)";
    if (s.index < 0 || static_cast<std::size_t>(s.index) >= x.count(s.dim) || t.index < 0 ||
        static_cast<std::size_t>(t.index) >= x.count(t.dim))
      return "index out of range";
    if (!alive[s.dim][s.index] || !alive[t.dim][t.index]) return "simplex already removed";
    auto f = x.faces(s.dim, s.index);
    if (std::find(f.begin(), f.end(), t.index) == f.end()) return "face is not a facet of the coface";
    if (live_cof[s.dim][s.index] != 0) return "coface still has a coface";
    if (live_cof[t.dim][t.index] != 1) return "face is not free";
    return {};
  }

  void remove(const CollapsePair& p) {
    for (const auto& r : {p.coface, p.face}) {
      alive[r.dim][r.index] = 0;
      --remaining;
      if (r.dim > 0)
        for (int f : x.faces(r.dim, r.index)) live_cof[r.dim - 1][f]--;
    }
  }

  bool single_vertex() const {
    if (remaining != 1) return false;
    for (std::size_t i = 0; i < x.count(0); ++i)
      if (alive[0][i]) return true;
    return false;
  }
};

}  // namespace

ValidationReport validate(const EmbeddedComplex& x, const CollapsingSequence& seq) {
  Sim sim(x);
  for (std::size_t i = 0; i < seq.pairs.size(); ++i) {
    auto why = sim.check(seq.pairs[i]);
    if (!why.empty()) return {false, i, why};
    sim.remove(seq.pairs[i]);
  }
  if (!sim.single_vertex())
    return {false, seq.pairs.size(), std::to_string(sim.remaining) + " simplices remain; expected a single vertex"};
  return {};
}

bool is_normalized(const CollapsingSequence& seq) {
  bool seen_other = false;
  for (const auto& p : seq.pairs) {
    if (p.kind() == CollapseKind::TetTri) {
      if (seen_other) return false;
    } else {
      seen_other = true;
    }
  }
  return true;
}

CollapsingSequence normalize(const EmbeddedComplex& x, const CollapsingSequence& seq) {
  auto base = validate(x, seq);
  if (!base.ok) throw Error(ErrorCode::CannotReorder, "input sequence is invalid: " + base.reason);
  if (is_normalized(seq)) return seq;

  CollapsingSequence out;
  std::vector<CollapsePair> tets, rest;
  for (const auto& p : seq.pairs) (p.kind() == CollapseKind::TetTri ? tets : rest).push_back(p);
  out.pairs = tets;
  out.pairs.insert(out.pairs.end(), rest.begin(), rest.end());
  if (validate(x, out).ok) return out;

  // Greedy repair: repeatedly take the earliest pending pair that is legal,
  // preferring tet-tri pairs.
  Sim sim(x);
  std::vector<CollapsePair> pending = out.pairs;
  std::vector<std::uint8_t> used(pending.size(), 0);
  out.pairs.clear();
  for (std::size_t step = 0; step < pending.size(); ++step) {
    std::size_t pick = pending.size();
    for (int pass = 0; pass < 2 && pick == pending.size(); ++pass)
      for (std::size_t i = 0; i < pending.size(); ++i) {
        if (used[i]) continue;
        if (pass == 0 && pending[i].kind() != CollapseKind::TetTri) continue;
        if (sim.check(pending[i]).empty()) {
          pick = i;
          break;
        }
      }
    if (pick == pending.size()) throw Error(ErrorCode::CannotReorder, "greedy repair found no legal pair");
    used[pick] = 1;
    sim.remove(pending[pick]);
    out.pairs.push_back(pending[pick]);
  }
  if (!is_normalized(out) || !validate(x, out).ok)
    throw Error(ErrorCode::CannotReorder, "repaired sequence is not normalized");
  return out;
}

}  // namespace hodge
