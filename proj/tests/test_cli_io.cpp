#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "hodge/cli.hpp"
#include "hodge/error.hpp"
#include "hodge/io.hpp"

using namespace hodge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  json report;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  json j;
  try {
    j = json::parse(out.str());
  } catch (const json::exception&) {
  }
  return {code, j, err.str()};
}

fs::path tmpdir() {
  auto p = fs::temp_directory_path() / ("hodge_cli_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

bool all_pass(const json& r) {
  if (!r.contains("checks")) return true;
  for (const auto& c : r["checks"])
    if (!c["pass"].get<bool>()) return false;
  return true;
}

}  // namespace

TEST_CASE("chain files round trip") {
  Chain c{1, ScopeTag::K, {1.0, -2.5, 0.0, 3.0}};
  Chain d = io::parse_chain(io::dump_chain(c));
  CHECK(d.dim == 1);
  CHECK(d.scope == ScopeTag::K);
  CHECK(d.values == c.values);
  CHECK_THROWS_AS(io::parse_chain("{\"dim\": 1}"), Error);
  CHECK_THROWS_AS(io::read_scx("/nonexistent/x.scx"), Error);
  CHECK_THROWS_AS(io::parse_scx("{\"vertices\": [[0, 1, 2]]}"), Error);
}

TEST_CASE("generate then validate") {
  auto dir = tmpdir();
  auto f = (dir / "ball1.scx").string();
  auto r = run({"generate", "--kind", "ball", "--size", "1", "--out", f});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.report["total_simplices"] == 15);
  r = run({"validate", "--complex", f});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.report["sequence"]["valid"] == true);

  auto pd = (dir / "pd2.scx").string();
  r = run({"generate", "--kind", "punctured_disk", "--genus", "2", "--out", pd});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.report["betti1_K"] == 2);

  r = run({"generate", "--kind", "grid_ball", "--size", "3", "--out", (dir / "gb.scx").string()});
  CHECK(r.code == cli::kExitOk);
  r = run({"validate", "--complex", (dir / "gb.scx").string()});
  CHECK(r.code == cli::kExitOk);

  // broken sequence: drop the last collapse
  RawComplex raw = io::read_scx(f);
  raw.collapses.pop_back();
  io::write_scx((dir / "broken.scx").string(), raw);
  r = run({"validate", "--complex", (dir / "broken.scx").string()});
  CHECK(r.code == cli::kExitValidation);

  raw = io::read_scx(f);
  raw.simplices[1].pop_back();
  io::write_scx((dir / "missing_face.scx").string(), raw);
  r = run({"validate", "--complex", (dir / "missing_face.scx").string()});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.report["error"]["code"] == "MissingFace");
}

TEST_CASE("solve, hodge and audit with verification") {
  auto dir = tmpdir();
  auto f = (dir / "an.scx").string();
  REQUIRE(run({"generate", "--kind", "annulus_in_ball", "--size", "3", "--out", f}).code == 0);
  for (const char* cmd : {"bases", "harmonic-basis", "hodge", "solve", "audit"}) {
    auto r = run({cmd, "--complex", f, "--verify", "--eps", "0.05", "--seed", "3"});
    INFO(cmd);
    CHECK(r.code == cli::kExitOk);
    CHECK(all_pass(r.report));
    CHECK(r.report["config"]["seed"] == 3);
  }
  auto r = run({"solve", "--complex", f, "--mode", "theory", "--verify"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.report["context"]["harmonic"]["log10_eps_prime"].get<double>() < -11);
}

TEST_CASE("solve reads and writes chains deterministically") {
  auto dir = tmpdir();
  auto f = (dir / "pd.scx").string();
  REQUIRE(run({"generate", "--kind", "punctured_disk", "--genus", "1", "--out", f}).code == 0);
  auto cx = EmbeddedComplex::build(io::read_scx(f));
  Scope k = Scope::subcomplex_K(cx);
  std::vector<double> b(cx->count(1), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<double>(i % 7) - 3.0;
  io::write_chain((dir / "b.json").string(), Chain{1, ScopeTag::X, b});
  auto o1 = (dir / "x1.json").string(), o2 = (dir / "x2.json").string();
  CHECK(run({"solve", "--complex", f, "--chain", (dir / "b.json").string(), "--out", o1, "--deterministic"}).code == 0);
  CHECK(run({"solve", "--complex", f, "--chain", (dir / "b.json").string(), "--out", o2, "--deterministic"}).code == 0);
  Chain x1 = io::read_chain(o1), x2 = io::read_chain(o2);
  CHECK(x1.values.size() == k.count(1));
  CHECK(x1.values == x2.values);

  io::write_chain((dir / "bad.json").string(), Chain{2, ScopeTag::K, {1.0}});
  CHECK(run({"solve", "--complex", f, "--chain", (dir / "bad.json").string()}).code == cli::kExitValidation);
}

TEST_CASE("exit codes") {
  CHECK(run({"solve", "--complex", "/nonexistent/a.scx"}).code == cli::kExitIo);
  CHECK(run({"solve"}).code == cli::kExitValidation);
  CHECK(run({}).code == cli::kExitValidation);
  CHECK(run({"solve", "--mode", "fast"}).code == cli::kExitValidation);
  auto dir = tmpdir();
  auto f = (dir / "b1.scx").string();
  REQUIRE(run({"generate", "--kind", "ball", "--size", "2", "--out", f}).code == 0);
  CHECK(run({"solve", "--complex", f, "--eps", "1.5"}).code == cli::kExitValidation);
  CHECK(run({"generate", "--kind", "punctured_disk", "--genus", "-1"}).code == cli::kExitValidation);
}

TEST_CASE("bench emits a monotone table") {
  auto r = run({"bench", "--kind", "grid_ball", "--sizes", "3,2", "--eps", "0.1"});
  REQUIRE(r.code == cli::kExitOk);
  const auto& t = r.report["table"];
  REQUIRE(t.size() == 2);
  CHECK(t[0]["n"].get<int>() < t[1]["n"].get<int>());
  for (const auto& row : t) {
    CHECK(row.contains("beta"));
    CHECK(row.contains("solve_s"));
    CHECK(row.contains("sdd_applications"));
  }
}
