#include "hodge/cli.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "hodge/error.hpp"
#include "hodge/generators.hpp"
#include "hodge/io.hpp"
#include "hodge/oracle.hpp"
#include "hodge/solver.hpp"

namespace hodge::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Common {
  std::string complex_path, chain_path, out_path;
  double eps = 0.05;
  std::string mode = "practical";
  bool verify = false;
  std::uint64_t seed = 1;
  bool deterministic = false;
};

class Report {
 public:
  explicit Report(std::string command) { j_["command"] = std::move(command); }
  json& operator[](const char* k) { return j_[k]; }
  void check(const std::string& name, double measured, double bound, bool pass) {
    j_["checks"].push_back({{"name", name}, {"measured", measured}, {"bound", bound}, {"pass", pass}});
    if (!pass) failed_ = true;
  }
  bool failed() const { return failed_; }
  const json& data() const { return j_; }

 private:
  json j_;
  bool failed_ = false;
};

void echo_config(Report& r, const Common& c) {
  r["config"] = {{"complex", c.complex_path}, {"chain", c.chain_path}, {"eps", c.eps},
                 {"mode", c.mode},            {"verify", c.verify},     {"seed", c.seed},
                 {"deterministic", c.deterministic}, {"threads", kernels::max_threads()}};
}

json counts_of(const EmbeddedComplex& cx) {
  json j;
  j["X"] = {cx.count(0), cx.count(1), cx.count(2), cx.count(3)};
  j["K"] = {cx.k_count(0), cx.k_count(1), cx.k_count(2), cx.k_count(3)};
  return j;
}

ComplexPtr load(const Common& c) {
  if (c.complex_path.empty()) throw Error(ErrorCode::InvalidParams, "--complex is required");
  return EmbeddedComplex::build(io::read_scx(c.complex_path));
}

SolverOptions solver_options(const Common& c) {
  SolverOptions o;
  o.eps = c.eps;
  o.mode = mode_from_string(c.mode);
  o.seed = c.seed;
  return o;
}

/// The input 1-chain on K: from --chain (restricted when given on X) or seeded random.
Vecd input_chain(const Common& c, const Scope& k) {
  if (c.chain_path.empty()) {
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> nd;
    Vecd v(k.count(1));
    for (double& x : v) x = nd(rng);
    return v;
  }
  Chain ch = io::read_chain(c.chain_path);
  if (ch.dim != 1) throw Error(ErrorCode::ScopeMismatch, "expected a 1-chain");
  if (ch.scope == ScopeTag::X) {
    if (ch.values.size() != k.complex().count(1)) throw Error(ErrorCode::ScopeMismatch, "chain length differs from X");
    return k.restrict(1, ch.values);
  }
  if (ch.scope != ScopeTag::K || ch.values.size() != k.count(1))
    throw Error(ErrorCode::ScopeMismatch, "chain must live on K or X");
  return ch.values;
}

void write_chain_out(const Common& c, const Vecd& v) {
  if (c.out_path.empty()) return;
  io::write_chain(c.out_path, Chain{1, ScopeTag::K, v});
}

json spectral_json(const SpectralEstimates& s) {
  return {{"lambda_min_k", s.lambda_min_k}, {"lambda_max_k", s.lambda_max_k}, {"lambda_min_x", s.lambda_min_x},
          {"lambda_max_x", s.lambda_max_x}, {"lambda_min_l2up_x", s.lambda_min_l2up_x},
          {"lambda_max_bound", s.lambda_max_bound}};
}

json context_json(const SolverContext& s, double eps) {
  json j;
  j["beta"] = s.beta();
  j["spectral"] = spectral_json(s.spectral());
  j["kappa_hat"] = s.kappa_hat();
  j["eps_prime"] = s.eps_prime(eps);
  j["fast_path"] = s.uses_fast_path();
  j["harmonic"] = {{"eps", s.harmonic().eps},
                   {"eps_prime", s.harmonic().eps_prime},
                   {"log10_eps_prime", s.harmonic().log10_eps_prime},
                   {"delta", s.harmonic().delta}};
  j["boundary"] = {{"log10_delta", s.boundary().log10_delta_for(eps)},
                   {"log10_amplification", s.boundary().log10_amplification()},
                   {"log10_pgamma_bound", s.gamma_correction().log10_norm_bound()}};
  j["sdd"] = {{"k_graph_degree", s.k_graph().sdd().degree_for(eps)},
              {"k_graph_amg_levels", s.k_graph().sdd().amg_levels()},
              {"k_dual_degree", s.k_dual().sdd().degree_for(eps)}};
  return j;
}

// ---------------------------------------------------------------------------

int cmd_generate(const Common& c, const std::string& kind, int size, int genus, Report& r) {
  auto t0 = Clock::now();
  RawComplex raw = gen::generate(kind, size, genus, c.seed);
  auto cx = EmbeddedComplex::build(raw);
  auto seq = CollapsingSequence::from_complex(*cx);
  auto v = validate(*cx, seq);
  r["timings"]["generate"] = since(t0);
  r["counts"] = counts_of(*cx);
  r["total_simplices"] = cx->total();
  r.check("collapsing_sequence_valid", v.ok ? 1 : 0, 1, v.ok);
  if (!v.ok) return kExitValidation;
  Scope k = Scope::subcomplex_K(cx);
  if (cx->total() <= oracle::kDefaultDenseCap) {
    int b1 = oracle::betti(k, 1);
    r["betti1_K"] = b1;
    if (kind == "punctured_disk") r.check("betti1_matches_genus", b1, genus, b1 == genus);
    if (kind == "annulus_in_ball") r.check("betti1_is_one", b1, 1, b1 == 1);
  }
  if (!c.out_path.empty()) io::write_scx(c.out_path, raw);
  return r.failed() ? kExitValidation : kExitOk;
}

int cmd_validate(const Common& c, Report& r) {
  auto t0 = Clock::now();
  auto cx = load(c);
  r["counts"] = counts_of(*cx);
  auto seq = CollapsingSequence::from_complex(*cx);
  auto v = validate(*cx, seq);
  r["sequence"] = {{"pairs", seq.pairs.size()}, {"valid", v.ok}, {"normalized", is_normalized(seq)},
                   {"reason", v.reason}};
  if (v.first_violation) r["sequence"]["first_violation"] = *v.first_violation;
  r.check("collapsing_sequence_valid", v.ok ? 1 : 0, 1, v.ok);
  if (!v.ok) return kExitValidation;
  auto norm = normalize(*cx, seq);
  r.check("normalized_sequence_valid", validate(*cx, norm).ok, 1, validate(*cx, norm).ok);
  Scope x = Scope::full(cx);
  auto dual = build_dual_graph(x);
  BuildTOptions bto;
  bto.verify_h2 = true;
  auto t = build_T(x, dual, bto);
  r["T"] = {{"triangles_removed", x.count(2) - t.T.count(2)}, {"dual_nodes", dual.num_nodes}};
  r["timings"]["validate"] = since(t0);
  return r.failed() ? kExitValidation : kExitOk;
}

int cmd_bases(const Common& c, Report& r) {
  auto cx = load(c);
  auto s = SolverContext::prepare(cx, solver_options(c));
  r["timings"] = s->timings();
  const auto& g = s->homology();
  const auto& p = s->cohomology();
  r["beta"] = s->beta();
  r["homology"] = {{"max_norm", g.max_norm}, {"norms", g.norms}, {"generators", g.generators}};
  r["cohomology"] = {{"max_norm", p.max_norm}, {"norms", p.norms}};
  if (s->beta() > 0) r["cohomology"]["span_distances"] = span_distances(p.chains);
  if (c.verify) {
    int b1 = oracle::betti(s->k(), 1, 8000);
    r.check("beta_matches_oracle", s->beta(), b1, s->beta() == b1);
    oracle::Mat m(s->beta(), s->beta());
    for (int i = 0; i < s->beta(); ++i)
      for (int j = 0; j < s->beta(); ++j) m(i, j) = kernels::dot(p.chains[i], g.chains[j]);
    const double det = s->beta() > 0 ? std::abs(m.determinant()) : 1.0;
    r.check("pairing_abs_det", det, 0.5, det >= 0.5);
  }
  if (!c.out_path.empty()) {
    json out;
    out["homology"] = g.chains;
    out["cohomology"] = p.chains;
    io::write_file(c.out_path, out.dump(1));
  }
  return r.failed() ? kExitVerification : kExitOk;
}

int cmd_harmonic(const Common& c, Report& r) {
  auto cx = load(c);
  auto s = SolverContext::prepare(cx, solver_options(c));
  r["timings"] = s->timings();
  r["context"] = context_json(*s, c.eps);
  if (c.verify) {
    oracle::HodgeOracle o(s->k());
    oracle::Mat g(static_cast<Eigen::Index>(s->k().count(1)), s->beta());
    for (int i = 0; i < s->beta(); ++i) g.col(i) = oracle::to_vec(s->harmonic().g[i]);
    double err = (g * g.transpose() - o.P_hr).norm();
    r.check("harmonic_projector_error", err, c.eps, err <= c.eps);
  }
  if (!c.out_path.empty()) io::write_file(c.out_path, json(s->harmonic().g).dump(1));
  return r.failed() ? kExitVerification : kExitOk;
}

int cmd_hodge(const Common& c, Report& r) {
  auto cx = load(c);
  auto s = SolverContext::prepare(cx, solver_options(c));
  Vecd x = input_chain(c, s->k());
  auto t0 = Clock::now();
  auto parts = s->hodge(c.eps, x);
  r["timings"] = s->timings();
  r["timings"]["hodge"] = since(t0);
  r["context"] = context_json(*s, c.eps);
  r["norms"] = {{"x", kernels::norm2(x)}, {"bd", kernels::norm2(parts.bd)}, {"hr", kernels::norm2(parts.hr)},
                {"cbd", kernels::norm2(parts.cbd)}};
  if (c.verify) {
    auto ex = oracle::exact_hodge(s->k(), oracle::to_vec(x));
    const double nx = kernels::norm2(x);
    double ebd = (oracle::to_vec(parts.bd) - ex.bd).norm();
    double ehr = (oracle::to_vec(parts.hr) - ex.hr).norm();
    double ecbd = (oracle::to_vec(parts.cbd) - ex.cbd).norm();
    r.check("bd_error", ebd, c.eps * nx, ebd <= c.eps * nx);
    r.check("hr_error", ehr, c.eps * nx, ehr <= c.eps * nx);
    r.check("cbd_error", ecbd, c.eps * nx, ecbd <= c.eps * nx);
  }
  if (!c.out_path.empty()) {
    json out{{"bd", parts.bd}, {"hr", parts.hr}, {"cbd", parts.cbd}, {"scope", "K"}, {"dim", 1}};
    io::write_file(c.out_path, out.dump(1));
  }
  return r.failed() ? kExitVerification : kExitOk;
}

int cmd_solve(const Common& c, Report& r) {
  auto cx = load(c);
  auto s = SolverContext::prepare(cx, solver_options(c));
  Vecd b = input_chain(c, s->k());
  auto t0 = Clock::now();
  Vecd xs = s->laplacian_solve(c.eps, b);
  r["timings"] = s->timings();
  r["timings"]["solve"] = since(t0);
  r["context"] = context_json(*s, c.eps);
  Vecd lx = laplacian_apply(s->k(), Laplacian::L1, xs);
  double res = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) res += (lx[i] - b[i]) * (lx[i] - b[i]);
  r["residual"] = {{"norm_Lx_minus_b", std::sqrt(res)}, {"norm_b", kernels::norm2(b)}};
  if (c.verify) {
    oracle::HodgeOracle o(s->k());
    const double eps = c.eps;
    oracle::Vec truth = o.L1_pinv * oracle::to_vec(b);
    oracle::Vec d = oracle::to_vec(xs) - truth;
    double en = std::sqrt(std::max(0.0, d.dot(o.L1 * d)));
    double et = std::sqrt(std::max(0.0, truth.dot(o.L1 * truth)));
    r.check("energy_error", en, eps * et, en <= eps * et + 1e-12);
    const int n1 = static_cast<int>(s->k().count(1));
    if (n1 <= 400) {
      oracle::Mat m = oracle::materialize(n1, [&](std::span<const double> v) { return s->laplacian_solve(eps, v); });
      double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
      oracle::Mat ms = 0.5 * (m + m.transpose());
      auto lo = oracle::loewner_check((1 - eps) * o.L1_pinv, ms, 1e-9);
      auto hi = oracle::loewner_check(ms, o.L1_pinv, 1e-9);
      r.check("symmetry", asym, 1e-10, asym <= 1e-10);
      r.check("lower_margin", lo.min_eig, -1e-9, lo.ok);
      r.check("upper_margin", hi.min_eig, -1e-9, hi.ok);
    }
  }
  write_chain_out(c, xs);
  return r.failed() ? kExitVerification : kExitOk;
}

int cmd_audit(const Common& c, Report& r) {
  auto cx = load(c);
  auto opt = solver_options(c);
  opt.spectral_x = true;
  auto s = SolverContext::prepare(cx, opt);
  r["timings"] = s->timings();
  const auto& sp = s->spectral();
  r["context"] = context_json(*s, c.eps);
  r.check("lambda_max_bound", sp.lambda_max_k, sp.lambda_max_bound, sp.bound_ok());

  auto nr = norm_estimates(s->x(), s->k(), s->fill(), s->squeeze(), s->cohomology_op(), sp.lambda_min_x);
  r.check("squeeze_norm", nr.squeeze, nr.squeeze_bound, nr.squeeze <= nr.squeeze_bound);
  r.check("fill_norm", nr.fill, nr.fill_bound, nr.fill <= nr.fill_bound);
  r.check("cohomology_norm", nr.cohom, nr.cohom_bound, nr.cohom <= nr.cohom_bound);

  auto det = det_bound_check(s->x(), 50, c.seed);
  r.check("det_bound_violations", det.violations, 0, det.violations == 0);

  if (s->beta() > 0) {
    auto gs = gs_perturbation_audit(s->beta(), 0.2, 1e-8, 50, c.seed);
    r.check("gs_violations", gs.gs_violations + gs.proj_violations, 0, gs.ok());
  }
  if (s->k().count(0) + s->k().count(1) + s->k().count(2) + s->k().count(3) <= oracle::kDefaultDenseCap) {
    double l2 = up_laplacian_range(s->x(), 3, 200, c.seed).lo;
    auto dr = delta_independence_report(s->cohomology(), s->k(), s->x(), sp.lambda_min_x, l2);
    r["delta"] = {{"measured", dr.delta_measured}, {"bound", dr.bound}, {"formula_l1", dr.delta_formula_l1},
                  {"formula_l2", dr.delta_formula_l2}, {"p_max", dr.p_max}};
    r.check("delta_at_least_bound", dr.delta_measured, dr.bound, dr.ok());
    auto ha = helper_identities_audit(s->k(), s->boundary(), s->gamma_correction(), s->k_graph().tree(), 5, c.seed);
    r.check("helper_identity_i", ha.identity_i, 1e-9, ha.identity_i <= 1e-9);
    r.check("helper_identity_ii", ha.identity_ii, 1e-9, ha.identity_ii <= 1e-9);
    r.check("pt_norm_sq", ha.pt_norm_sq, ha.pt_bound, ha.pt_norm_sq <= ha.pt_bound);
  }
  return r.failed() ? kExitVerification : kExitOk;
}

int cmd_bench(const Common& c, const std::string& kind, const std::vector<int>& sizes, int genus, Report& r,
              std::ostream& err) {
  std::vector<int> ladder = sizes;
  std::sort(ladder.begin(), ladder.end());
  r["table"] = json::array();
  err << "n,beta,prepare_s,solve_s,sdd_applications\n";
  for (int size : ladder) {
    auto cx = EmbeddedComplex::build(gen::generate(kind, size, genus, c.seed));
    auto t0 = Clock::now();
    auto s = SolverContext::prepare(cx, solver_options(c));
    double prep = since(t0);
    Common rc = c;
    rc.chain_path.clear();
    Vecd b = input_chain(rc, s->k());
    const auto before = s->k_graph().sdd().applications() + s->k_dual().sdd().applications();
    t0 = Clock::now();
    Vecd xs = s->laplacian_solve(c.eps, b);
    double solve = since(t0);
    const auto apps = s->k_graph().sdd().applications() + s->k_dual().sdd().applications() - before;
    r["table"].push_back({{"size", size},
                          {"n", cx->total()},
                          {"beta", s->beta()},
                          {"prepare_s", prep},
                          {"solve_s", solve},
                          {"sdd_applications", apps},
                          {"timings", s->timings()}});
    err << cx->total() << ',' << s->beta() << ',' << prep << ',' << solve << ',' << apps << '\n';
  }
  if (!c.out_path.empty()) io::write_file(c.out_path, r.data()["table"].dump(1));
  return kExitOk;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return kExitIo;
    case ErrorCode::NotSymmetric: return kExitVerification;
    default: return kExitValidation;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hodge decomposition and 1-Laplacian solver for complexes embedded in R^3", "hodge"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--complex", c.complex_path, ".scx complex file");
    sub->add_option("--chain", c.chain_path, "1-chain JSON file (scope K or X)");
    sub->add_option("--eps", c.eps, "accuracy in (0,1)");
    sub->add_option("--mode", c.mode, "theory or practical")->check(CLI::IsMember({"theory", "practical"}));
    sub->add_flag("--verify", c.verify, "check against the dense oracle");
    sub->add_option("--seed", c.seed, "64-bit seed for all randomness");
    sub->add_flag("--deterministic", c.deterministic, "single-threaded kernels");
    sub->add_option("--out", c.out_path, "output artifact path");
  };
  std::string kind = "grid_ball";
  int size = 2, genus = 0;
  std::vector<int> sizes{2, 3, 4};

  auto* g = app.add_subcommand("generate", "write a generated instance");
  add_common(g);
  g->add_option("--kind", kind)->check(CLI::IsMember({"ball", "grid_ball", "punctured_disk", "annulus_in_ball"}));
  g->add_option("--size", size);
  g->add_option("--genus", genus);
  auto* v = app.add_subcommand("validate", "validate a complex and its collapsing sequence");
  add_common(v);
  auto* b = app.add_subcommand("bases", "homology and cohomology bases of K");
  add_common(b);
  auto* h = app.add_subcommand("harmonic-basis", "approximate orthonormal harmonic basis");
  add_common(h);
  auto* d = app.add_subcommand("hodge", "approximate Hodge decomposition of a 1-chain");
  add_common(d);
  auto* s = app.add_subcommand("solve", "approximate L1 pseudoinverse applied to a 1-chain");
  add_common(s);
  auto* a = app.add_subcommand("audit", "norm, independence and identity audits");
  add_common(a);
  auto* be = app.add_subcommand("bench", "solve over a size ladder");
  add_common(be);
  be->add_option("--kind", kind)->check(CLI::IsMember({"ball", "grid_ball", "punctured_disk", "annulus_in_ball"}));
  be->add_option("--sizes", sizes)->delimiter(',');
  be->add_option("--genus", genus);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << '\n';
    return kExitValidation;
  }

  auto* sub = app.get_subcommands().front();
  Report r(sub->get_name());
  int code = kExitOk;
  try {
    if (c.deterministic) kernels::set_max_threads(1);
    echo_config(r, c);
    if (!(c.eps > 0 && c.eps < 1)) throw Error(ErrorCode::InvalidParams, "--eps must lie in (0,1)");
    if (sub == g) code = cmd_generate(c, kind, size, genus, r);
    else if (sub == v) code = cmd_validate(c, r);
    else if (sub == b) code = cmd_bases(c, r);
    else if (sub == h) code = cmd_harmonic(c, r);
    else if (sub == d) code = cmd_hodge(c, r);
    else if (sub == s) code = cmd_solve(c, r);
    else if (sub == a) code = cmd_audit(c, r);
    else code = cmd_bench(c, kind, sizes, genus, r, err);
  } catch (const Error& e) {
    r["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    err << "error: " << e.what() << '\n';
    code = exit_for(e.code());
  }
  r["exit_code"] = code;
  out << r.data().dump(2) << '\n';
  return code;
}

}  // namespace hodge::cli
