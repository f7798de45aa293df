#include "hodge/chain_ops.hpp"

#include <algorithm>
#include <cmath>

#include "hodge/error.hpp"

namespace hodge {

Vecd include(const Scope& k, std::span<const double> x) { return k.extend(1, x); }
Vecd include_transpose(const Scope& k, std::span<const double> x) { return k.restrict(1, x); }

// ---------------------------------------------------------------------------

FillPlan::FillPlan(const Scope& x, const CollapsingSequence& seq) : cx_(&x.complex()) {
  if (x.tag() != ScopeTag::X) throw Error(ErrorCode::ScopeMismatch, "fill plan lives on X");
  if (!is_normalized(seq)) throw Error(ErrorCode::SequenceNotNormalized, "tet-tri pairs must come first");
  n1_ = cx_->count(1);
  n2_ = cx_->count(2);
  for (const auto& p : seq.pairs) {
    if (p.kind() == CollapseKind::TriEdge) {
      auto f = cx_->faces(2, p.coface.index);
      int j = static_cast<int>(std::find(f.begin(), f.end(), p.face.index) - f.begin());
      if (j > 2) throw Error(ErrorCode::InvalidInput, "collapse pair face is not a facet");
      steps_.push_back({p.coface.index, p.face.index, j % 2 == 0 ? 1.0 : -1.0});
    } else if (p.kind() == CollapseKind::EdgeVertex) {
      tree_edges_.push_back(p.coface.index);
    }
  }
}

Vecd FillPlan::apply(std::span<const double> gamma) const {
  if (gamma.size() != n1_) throw Error(ErrorCode::ScopeMismatch, "fill: expects a 1-chain of X");
  Vecd r(gamma.begin(), gamma.end());
  Vecd x(n2_, 0.0);
  for (const auto& s : steps_) {
    const double c = s.sign * r[s.edge];
    if (c == 0.0) continue;
    x[s.tri] = c;
    auto f = cx_->faces(2, s.tri);
    r[f[0]] -= c;
    r[f[1]] += c;
    r[f[2]] -= c;
  }
  return x;
}

Vecd FillPlan::apply_transpose(std::span<const double> z) const {
  if (z.size() != n2_) throw Error(ErrorCode::ScopeMismatch, "fill transpose: expects a 2-chain of X");
  Vecd rb(n1_, 0.0);
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    auto f = cx_->faces(2, it->tri);
    const double xb = z[it->tri] - (rb[f[0]] - rb[f[1]] + rb[f[2]]);
    rb[it->edge] += it->sign * xb;
  }
  return rb;
}

// ---------------------------------------------------------------------------

SqueezeOp::SqueezeOp(const Scope& x, const Scope& t, std::vector<SqueezeStep> order)
    : cx_(&x.complex()), t_(&t), order_(std::move(order)) {
  if (&t.complex() != cx_) throw Error(ErrorCode::OrderMismatch, "T is not a scope over X");
  const std::size_t n2 = cx_->count(2);
  std::vector<int> removed_at(n2, -1);
  std::vector<std::uint8_t> tet_used(cx_->count(3), 0);
  for (std::size_t i = 0; i < order_.size(); ++i) {
    const auto& s = order_[i];
    if (s.triangle < 0 || static_cast<std::size_t>(s.triangle) >= n2 || s.tet < 0 ||
        static_cast<std::size_t>(s.tet) >= cx_->count(3))
      throw Error(ErrorCode::OrderMismatch, "step " + std::to_string(i) + " out of range");
    if (t.contains(2, s.triangle)) throw Error(ErrorCode::OrderMismatch, "step removes a triangle of T");
    if (removed_at[s.triangle] >= 0) throw Error(ErrorCode::OrderMismatch, "triangle removed twice");
    if (tet_used[s.tet]) throw Error(ErrorCode::OrderMismatch, "tetrahedron used twice");
    auto f = cx_->faces(3, s.tet);
    int j = static_cast<int>(std::find(f.begin(), f.end(), s.triangle) - f.begin());
    if (j > 3) throw Error(ErrorCode::OrderMismatch, "step " + std::to_string(i) + ": triangle is not a facet of the tet");
    for (int g : f)
      if (removed_at[g] >= 0)
        throw Error(ErrorCode::OrderMismatch, "step " + std::to_string(i) + ": tet lost a facet earlier");
    removed_at[s.triangle] = static_cast<int>(i);
    tet_used[s.tet] = 1;
    sign_.push_back(j % 2 == 0 ? 1.0 : -1.0);
  }
  for (std::size_t f = 0; f < n2; ++f)
    if (!t.contains(2, static_cast<int>(f)) && removed_at[f] < 0)
      throw Error(ErrorCode::OrderMismatch, "triangle " + std::to_string(f) + " of X∖T is never squeezed");
}

Vecd SqueezeOp::apply_prefix(std::span<const double> x, std::size_t steps) const {
  if (x.size() != cx_->count(2)) throw Error(ErrorCode::ScopeMismatch, "squeeze: expects a 2-chain of X");
  Vecd y(x.begin(), x.end());
  steps = std::min(steps, order_.size());
  for (std::size_t i = 0; i < steps; ++i) {
    const auto& s = order_[i];
    const double c = y[s.triangle] * sign_[i];
    if (c == 0.0) continue;
    auto f = cx_->faces(3, s.tet);
    y[f[0]] -= c;
    y[f[1]] += c;
    y[f[2]] -= c;
    y[f[3]] += c;
  }
  return y;
}

Vecd SqueezeOp::apply(std::span<const double> x) const { return t_->restrict(2, apply_prefix(x, order_.size())); }

Vecd SqueezeOp::apply_transpose(std::span<const double> tl) const {
  Vecd z = t_->extend(2, tl);
  for (std::size_t i = order_.size(); i-- > 0;) {
    auto f = cx_->faces(3, order_[i].tet);
    const double q = z[f[0]] - z[f[1]] + z[f[2]] - z[f[3]];
    z[order_[i].triangle] -= sign_[i] * q;
  }
  return z;
}

// ---------------------------------------------------------------------------

CohomologyOperator::CohomologyOperator(const Scope& k, const FillPlan& fill, const SqueezeOp& squeeze)
    : k_(&k), fill_(&fill), squeeze_(&squeeze) {
  const auto& t = squeeze.t_scope();
  keep_.resize(t.count(2));
  for (std::size_t l = 0; l < t.count(2); ++l) keep_[l] = k.contains(2, t.to_global(2, static_cast<int>(l))) ? 0 : 1;
}

Vecd CohomologyOperator::half(std::span<const double> g) const {
  Vecd t = squeeze_->apply(fill_->apply(include(*k_, g)));
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!keep_[i]) t[i] = 0.0;
  return t;
}

Vecd CohomologyOperator::half_transpose(std::span<const double> t2) const {
  Vecd t(t2.begin(), t2.end());
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!keep_[i]) t[i] = 0.0;
  return include_transpose(*k_, fill_->apply_transpose(squeeze_->apply_transpose(t)));
}

Vecd CohomologyOperator::apply(std::span<const double> g) const { return half_transpose(half(g)); }

// ---------------------------------------------------------------------------

UOperator::UOperator(const Scope& k, const FillPlan& fill, const SqueezeOp& squeeze)
    : k_(&k), fill_(&fill), squeeze_(&squeeze) {
  const auto& t = squeeze.t_scope();
  t_to_k_.resize(t.count(2));
  for (std::size_t l = 0; l < t.count(2); ++l) t_to_k_[l] = k.to_local(2, t.to_global(2, static_cast<int>(l)));
}

Vecd UOperator::apply(std::span<const double> y) const {
  Vecd t = squeeze_->apply(fill_->apply(include(*k_, y)));
  Vecd w(k_->count(2), 0.0);
  for (std::size_t l = 0; l < t.size(); ++l)
    if (t_to_k_[l] >= 0) w[t_to_k_[l]] = t[l];
  return w;
}

Vecd UOperator::apply_transpose(std::span<const double> w) const {
  Vecd t(t_to_k_.size(), 0.0);
  for (std::size_t l = 0; l < t.size(); ++l)
    if (t_to_k_[l] >= 0) t[l] = w[t_to_k_[l]];
  return include_transpose(*k_, fill_->apply_transpose(squeeze_->apply_transpose(t)));
}

// ---------------------------------------------------------------------------

NormReport norm_estimates(const Scope& x, const Scope& k, const FillPlan& fill, const SqueezeOp& squeeze,
                          const CohomologyOperator& c, double lambda_min_x, int iters) {
  NormReport r;
  const double n1 = static_cast<double>(x.count(1));
  const double n2 = static_cast<double>(x.count(2));
  const int nt = static_cast<int>(squeeze.t_scope().count(2));
  LinOp s{"S", nt, static_cast<int>(n2), [&](std::span<const double> v) { return squeeze.apply(v); },
          [&](std::span<const double> v) { return squeeze.apply_transpose(v); }};
  LinOp f{"F", static_cast<int>(n2), static_cast<int>(n1), [&](std::span<const double> v) { return fill.apply(v); },
          [&](std::span<const double> v) { return fill.apply_transpose(v); }};
  r.squeeze = power_norm(s, iters);
  r.fill = power_norm(f, iters);
  r.cohom = power_max_eig(static_cast<int>(k.count(1)), [&](std::span<const double> v) { return c.apply(v); }, iters);
  r.lambda_min_x = lambda_min_x;
  r.squeeze_bound = 2.0 * n2;
  r.fill_bound = lambda_min_x > 0 ? 2.0 * (n1 + 1.0) * n2 / std::sqrt(lambda_min_x) : INFINITY;
  // ‖C‖ <= ‖S‖²‖F‖², which gives alpha = 16 (n1+1)² / n1².
  r.alpha = 16.0 * (n1 + 1.0) * (n1 + 1.0) / std::max(1.0, n1 * n1);
  r.cohom_bound = lambda_min_x > 0 ? r.alpha * n1 * n1 * std::pow(n2, 4) / lambda_min_x : INFINITY;
  return r;
}

}  // namespace hodge
