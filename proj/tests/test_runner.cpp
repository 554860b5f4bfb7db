#include <functional>

#include "doctest.h"
#include "json.hpp"
#include "osclax/error.hpp"
#include "osclax/parallel.hpp"
#include "osclax/runner.hpp"

using namespace osclax;

namespace {

RunConfig cfg(const std::string& command, const std::string& target) {
  RunConfig c;
  c.command = command;
  c.target = target;
  return c;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("run config JSON round trip") {
  RunConfig c = cfg("qsys", "build");
  c.rank = 3;
  c.family = "fund-i";
  c.length = 2;
  c.twists = std::vector<Rational>{Rational(1, 2), Rational(-2, 3), Rational(5)};
  c.swap = std::make_pair(1, 3);
  c.seed = 9;
  c.s = Rational(3, 2);
  c.long_run = true;
  c.dump = true;
  auto back = RunConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.twists->at(1) == Rational(-2, 3));
  CHECK(back.swap->second == 3);
}

TEST_CASE("run config parse errors") {
  CHECK(code_of([] { RunConfig::from_json("{\"command\":\"verify\",\"colour\":1}"); }) == ErrorCode::kParse);
  CHECK(code_of([] { RunConfig::from_json("[1,2]"); }) == ErrorCode::kParse);
  CHECK(code_of([] { RunConfig::from_json("{\"target\":\"rtt\"}"); }) == ErrorCode::kParse);
  CHECK(code_of([] { RunConfig::from_json("{\"command\":\"verify\",\"rank\":\"three\"}"); }) == ErrorCode::kParse);
}

TEST_CASE("verify targets run and fail on their mutants") {
  auto c = cfg("verify", "rtt");
  c.family = "spinor-degenerate";
  c.rank = 3;
  CHECK(run(c).report.pass);
  c.mutation = "negate-entry";
  auto bad = run(c).report;
  CHECK_FALSE(bad.pass);
  CHECK(nlohmann::json::parse(bad.params).at("mutation") == "negate-entry");

  auto g = cfg("verify", "g-relation");
  g.rank = 3;
  CHECK(run(g).report.pass);
  g.mutation = "drop-kappa";
  CHECK_FALSE(run(g).report.pass);

  auto f = cfg("verify", "factorization");
  f.rank = 3;
  CHECK(run(f).report.pass);
  f.mutation = "shift";
  CHECK_FALSE(run(f).report.pass);

  auto d = cfg("verify", "dictionary");
  d.rank = 3;
  CHECK(run(d).report.pass);
  d.mutation = "swapped";
  CHECK_FALSE(run(d).report.pass);
}

TEST_CASE("every verify target passes at its default rank") {
  for (const auto& t : verify_targets()) {
    CAPTURE(t);
    auto rep = run(cfg("verify", t)).report;
    CHECK(rep.pass);
    CHECK(!rep.check_id.empty());
  }
}

TEST_CASE("invariance covers all sign vectors and swaps") {
  auto c = cfg("verify", "invariance");
  c.rank = 3;
  auto rep = run(c).report;
  CHECK(rep.pass);
  CHECK(rep.notes.size() == 8 + 3);
  c.signs = {1, -1, 1};
  CHECK(run(c).report.notes.empty());
  c.signs = {1, -1};
  CHECK(code_of([&] { run(c); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("invalid configurations") {
  CHECK(code_of([] { run(cfg("frobnicate", "rtt")); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { run(cfg("verify", "nonsense")); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { run(cfg("suite", "nonsense")); }) == ErrorCode::kInvalidArgument);
  auto r0 = cfg("verify", "rtt");
  r0.rank = 0;
  CHECK(code_of([&] { run(r0); }) == ErrorCode::kInvalidArgument);
  auto m = cfg("verify", "appendix");
  m.mutation = "shift";
  CHECK(code_of([&] { run(m); }) == ErrorCode::kInvalidArgument);
  auto qq = cfg("qsys", "qq");
  qq.length = 3;
  CHECK(code_of([&] { run(qq); }) == ErrorCode::kInvalidArgument);
  qq.length = 1;
  qq.relation = "spinor3";
  CHECK(code_of([&] { run(qq); }) == ErrorCode::kInvalidArgument);
  auto deg = cfg("qsys", "commute");
  deg.rank = 3;
  deg.twists = std::vector<Rational>{Rational(1, 2), Rational(1, 3), Rational(3)};
  CHECK(code_of([&] { run(deg); }) == ErrorCode::kPrecondition);
  auto fi = cfg("qsys", "build");
  fi.rank = 3;
  fi.family = "fund-i";
  CHECK(code_of([&] { run(fi); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("qsys build and dump") {
  auto c = cfg("qsys", "build");
  c.rank = 3;
  c.family = "spinor";
  c.signs = {1, -1, 1};
  c.dump = true;
  auto res = run(c);
  CHECK(res.report.pass);
  CHECK(res.report.check_id == "qsys-build");
  CHECK(nlohmann::json::parse(res.report.params).at("operator") == "spinor{2}");
  CHECK(!res.dump.empty());
  CHECK(res.dump == run(c).dump);
  c.dump = false;
  CHECK(run(c).dump.empty());
  for (const char* fam : {"transfer", "q0", "fund", "fund-bar"}) {
    c.family = fam;
    c.signs.clear();
    CHECK(run(c).report.pass);
  }
  c.family = "fund-bar-i";
  c.swap = std::make_pair(2, 3);
  CHECK(run(c).report.pass);
}

TEST_CASE("qsys commute and qq through the runner") {
  auto c = cfg("qsys", "commute");
  c.rank = 3;
  c.length = 1;
  c.seed = 4;
  CHECK(run(c).report.pass);
  auto q = cfg("qsys", "qq");
  q.rank = 4;
  CHECK(run(q).report.pass);
  q.mutation = "wrong-node";
  CHECK_FALSE(run(q).report.pass);
}

TEST_CASE("reports are deterministic and thread-count invariant") {
  auto c = cfg("qsys", "commute");
  c.rank = 3;
  c.length = 2;
  c.seed = 11;
  int saved = thread_count();
  set_thread_count(1);
  std::string a = run(c).report.to_json(false);
  set_thread_count(3);
  std::string b = run(c).report.to_json(false);
  set_thread_count(saved);
  CHECK(a == b);
  CHECK(nlohmann::json::parse(a).at("elapsed_ms") == 0.0);
}

TEST_CASE("stretch suite is gated") {
  auto rep = run(cfg("suite", "stretch")).report;
  CHECK(rep.pass);
  REQUIRE(rep.notes.size() == 1);
  CHECK(rep.notes[0] == "skipped: requires --long");
}

TEST_CASE("paper-core suite passes") {
  auto rep = run(cfg("suite", "paper-core")).report;
  CHECK(rep.pass);
  CHECK(rep.check_id == "suite-paper-core");
  CHECK(rep.notes.size() > 20);
}
