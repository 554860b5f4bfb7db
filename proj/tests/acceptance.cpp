// Acceptance run: one line per criterion, nonzero exit if any fails.
// Details of failing sub-checks go to stderr.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "osclax/error.hpp"
#include "osclax/fock.hpp"
#include "osclax/qsystem.hpp"
#include "osclax/runner.hpp"
#include "osclax/verify.hpp"
#include "support.hpp"

using namespace osclax;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::vector<std::string> detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail.push_back(what);
    }
  }
  // Runs one report-producing step; the report must pass (or fail, for mutants).
  void report(const std::string& what, const std::function<CheckReport()>& f, bool want_pass = true,
              double budget_s = 0) {
    auto t0 = Clock::now();
    try {
      CheckReport rep = f();
      double dt = seconds_since(t0);
      expect(rep.pass == want_pass, what + (want_pass ? ": failed" : ": mutant was not detected"));
      if (budget_s > 0) expect(dt < budget_s, what + ": " + std::to_string(dt) + " s over budget");
      if (rep.pass != want_pass && !rep.witnesses.empty())
        detail.push_back("  first witness " + rep.witnesses.front().row + " " + rep.witnesses.front().col);
      std::cerr << "  " << what << " " << (rep.pass ? "pass" : "fail") << " " << dt << " s\n";
    } catch (const std::exception& e) {
      expect(false, what + ": threw " + e.what());
    }
  }
};

RunConfig verify(const std::string& target, int r, const std::string& family = "") {
  RunConfig c;
  c.command = "verify";
  c.target = target;
  c.rank = r;
  if (!family.empty()) c.family = family;
  return c;
}

RunConfig qsys(const std::string& target, int r, int n, const std::vector<Rational>& tw) {
  RunConfig c;
  c.command = "qsys";
  c.target = target;
  c.rank = r;
  c.length = n;
  c.twists = tw;
  return c;
}

std::function<CheckReport()> via(RunConfig c) {
  return [c] { return run(c).report; };
}

std::string twist_text(const std::vector<Rational>& t) {
  std::string out;
  for (const auto& x : t) out += (out.empty() ? "" : ",") + x.str();
  return out;
}

// ---- oracle suite -------------------------------------------------------

int max_creation(const AlgebraElement& e) {
  int d = 0;
  for (const auto& [m, c] : e.terms())
    for (const auto& f : m.factors()) d = std::max(d, f.p);
  return d;
}

void wick_oracle(Outcome& out) {
  auto c = osclax::testing::plain_context(3);
  std::mt19937 rng(20261014);
  std::map<int, Rational> eval{{0, Rational(2, 3)}, {1, Rational(-5, 7)}};
  const int cutoff = 10;
  std::vector<int> modes{0, 1, 2};
  int agreed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto a = osclax::testing::random_element(c, rng, 3, 4);
    auto b = osclax::testing::random_element(c, rng, 3, 4);
    auto lhs = to_truncated_fock(a * b, cutoff, eval, modes);
    auto rhs = to_truncated_fock(a, cutoff, eval, modes) * to_truncated_fock(b, cutoff, eval, modes);
    agreed += lhs.equal_on(rhs, cutoff, cutoff - max_creation(b));
  }
  out.expect(agreed == 100, "wick vs Fock: " + std::to_string(agreed) + "/100 agree");
}

void trace_oracle(Outcome& out) {
  auto c = osclax::testing::plain_context(2);
  const int cutoff = 60;
  Rational w(1, 2);
  std::vector<Rational> wp(2 * cutoff + 1, Rational(1));
  for (int k = 1; k <= 2 * cutoff; ++k) wp[static_cast<std::size_t>(k)] = wp[static_cast<std::size_t>(k - 1)] * w;
  double worst = 0;
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto e = osclax::testing::random_element(c, rng, 4, 4, false);
    Rational exact = twisted_trace_numeric(e, {{0, w}, {1, w}}, false).constant_term();
    auto rep = to_truncated_fock(e, cutoff, {}, {0, 1});
    Rational sum(0);
    for (int i = 0; i < rep.dim(); ++i) {
      auto occ = rep.occupation(i);
      Rational d = rep.at(i, i);
      if (!d.is_zero()) sum += d * wp[static_cast<std::size_t>(occ[0] + occ[1])];
    }
    if (exact.is_zero()) {
      out.expect(std::fabs(sum.to_double()) < 1e-12, "trace series of a traceless element is not small");
      continue;
    }
    worst = std::max(worst, std::fabs(((exact - sum) / exact).to_double()));
  }
  out.expect(worst < 1e-12, "twisted trace relative error " + std::to_string(worst));
  std::cerr << "  twisted trace worst relative error " << worst << "\n";
}

int total(const std::vector<int>& occ) {
  int t = 0;
  for (int k : occ) t += k;
  return t;
}

// exp(Y) g exp(-Y) in the truncated Fock space against the rule image of g.
// Every term of Y raises the total occupation, so rows with total <= cutoff - 1
// see no truncation.
void shift_oracle(Outcome& out, FactorizationId id, int r) {
  const int cutoff = 6;
  auto sh = factorization_shift(id, r);
  const auto& ctx = sh.ctx;
  std::vector<int> modes;
  for (int m = 0; m < ctx->modes->size(); ++m) modes.push_back(m);
  auto ey = to_truncated_fock(sh.exponent, cutoff, {}, modes).exp_nilpotent();
  auto emy = to_truncated_fock(-sh.exponent, cutoff, {}, modes).exp_nilpotent();
  int rules = 0, bad = 0;
  for (bool creation : {false, true}) {
    const auto& slot = creation ? sh.rules.creation : sh.rules.annihilation;
    for (const auto& [m, image] : slot) {
      AlgebraElement g = creation ? AlgebraElement::creation(ctx, m) : AlgebraElement::annihilation(ctx, m);
      if (image == g) continue;
      ++rules;
      auto lhs = ey * to_truncated_fock(g, cutoff, {}, modes) * emy;
      auto rhs = to_truncated_fock(image, cutoff, {}, modes);
      for (int i = 0; i < lhs.dim(); ++i) {
        if (total(lhs.occupation(i)) > cutoff - 1) continue;
        auto cols = lhs.row(i);
        for (const auto& [j, v] : rhs.row(i)) cols.emplace(j, Rational(0));
        for (const auto& [j, v] : cols)
          if (!(lhs.at(i, j) == rhs.at(i, j))) {
            ++bad;
            break;
          }
      }
    }
  }
  std::string what = std::string("shift rules ") + factorization_name(id) + " r=" + std::to_string(r);
  out.expect(rules > 0, what + ": no nontrivial rules");
  out.expect(bad == 0, what + ": " + std::to_string(bad) + " rows disagree");
  std::cerr << "  " << what << ": " << rules << " rules, " << bad << " bad rows\n";
}

// ---- mutants ----------------------------------------------------------------

// Off-diagonal entry carrying oscillators.
std::pair<int, int> off_diagonal_operator_entry(const OpMatrix& l) {
  for (const auto& [k, e] : l.entries())
    if (k.first != k.second && !e.is_scalar() && !e.is_zero()) return k;
  fail(ErrorCode::kInvalidArgument, "no off-diagonal oscillator entry");
}

GeneratorSet mutated_spinor_generators(int r) {
  LaxSpec spec;
  spec.family = LaxFamily::kSpinorFull;
  spec.rank = r;
  auto ctx = lax_context(spec);
  OpMatrix l = build_lax(spec, ctx, "z");
  auto [i, j] = off_diagonal_operator_entry(l);
  return extract_generators(mutate_negate_entry(l, i, j), ctx->ring->index("z"));
}

CheckReport expect_error(ErrorCode code, const std::function<void()>& f, const std::string& id) {
  CheckReport rep;
  rep.check_id = id;
  try {
    f();
    rep.pass = false;
  } catch (const Error& e) {
    rep.pass = e.code() == code;
  }
  return rep;
}

CheckReport unconjugated_inverse_twist(int r) {
  ChainSpec spec{r, 2, default_twists(r)};
  ChainSpec flipped = spec;
  flipped.twists[0] = Rational(1) / flipped.twists[0];
  QSelector sel{QFamily::kSpinor, {}, 0};
  auto t = transfer_matrix(spec, "x");
  auto q = q_operator(flipped, sel, "z").op;
  CheckReport rep;
  rep.check_id = "commuting-mutant";
  rep.pass = commutator(t, q).is_zero();
  return rep;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    std::function<void(Outcome&)> body;
  };
  using TwistPoint = std::function<std::vector<Rational>(int)>;
  const std::vector<TwistPoint> points = {[](int r) { return default_twists(r); },
                                          [](int r) { return random_twists(r, 1); }};

  std::vector<Criterion> all = {
      {1, "RTT spinor-degenerate r=2..5, each < 60 s",
       [&](Outcome& o) {
         for (int r = 2; r <= 5; ++r)
           o.report("rtt spinor-degenerate r=" + std::to_string(r), via(verify("rtt", r, "spinor-degenerate")), true, 60);
       }},
      {2, "RTT fund-degenerate r=3,4, r=4 < 600 s",
       [&](Outcome& o) {
         o.report("rtt fund-degenerate r=3", via(verify("rtt", 3, "fund-degenerate")));
         o.report("rtt fund-degenerate r=4", via(verify("rtt", 4, "fund-degenerate")), true, 600);
       }},
      {3, "D3 matrices satisfy RTT; rank-3 spinor family matches level 3 under the dictionary",
       [&](Outcome& o) {
         o.report("rtt d3-level3", via(verify("rtt", 3, "d3-level3")));
         o.report("rtt d3-level2", via(verify("rtt", 3, "d3-level2")));
         o.report("dictionary", via(verify("dictionary", 3)));
       }},
      {4, "so(2r) relations, characteristic identities, G relation r=3,4,5, combined < 1800 s",
       [&](Outcome& o) {
         auto t0 = Clock::now();
         for (int r = 3; r <= 5; ++r) {
           std::string rs = " r=" + std::to_string(r);
           o.report("so2r spinor-full" + rs, via(verify("so2r", r, "spinor-full")));
           o.report("so2r fund-full" + rs, via(verify("so2r", r, "fund-full")));
           o.report("characteristic spinor" + rs, via(verify("characteristic", r, "spinor-full")));
           o.report("characteristic fund" + rs, via(verify("characteristic", r, "fund-full")));
           o.report("g-relation" + rs, via(verify("g-relation", r)));
         }
         double dt = seconds_since(t0);
         o.expect(dt < 1800, "combined time " + std::to_string(dt) + " s");
       }},
      {5, "factorizations and scaled limits r=3,4",
       [&](Outcome& o) {
         for (int r : {3, 4}) {
           std::string rs = " r=" + std::to_string(r);
           for (auto id : {FactorizationId::kSpinor, FactorizationId::kQuad, FactorizationId::kFund})
             o.report(std::string("factorization ") + factorization_name(id) + rs,
                      [id, r] { return check_factorization(id, r); });
           o.report("limit spinor" + rs, [r] { return check_limit(RepKind::kSpinor, r); });
           o.report("limit fund" + rs, [r] { return check_limit(RepKind::kFundamental, r); });
         }
       }},
      {6, "basis change S K S^-1 = Q, F/M map, M relations r=2..4",
       [&](Outcome& o) {
         for (int r = 2; r <= 4; ++r) o.report("appendix r=" + std::to_string(r), via(verify("appendix", r)));
       }},
      {7, "commuting family r=3 (N=1,2), r=4 (N=1) at two twist points",
       [&](Outcome& o) {
         for (const auto& tw : points) {
           for (int n : {1, 2})
             o.report("commute r=3 N=" + std::to_string(n) + " t=" + twist_text(tw(3)), via(qsys("commute", 3, n, tw(3))));
           o.report("commute r=4 N=1 t=" + twist_text(tw(4)), via(qsys("commute", 4, 1, tw(4))));
         }
       }},
      {8, "QQ relations r=4 N=1,2 at two twist points, N=2 < 1800 s",
       [&](Outcome& o) {
         for (const auto& tw : points)
           for (int n : {1, 2}) {
             RunConfig c = qsys("qq", 4, n, tw(4));
             c.relation = "all";
             o.report("qq r=4 N=" + std::to_string(n) + " t=" + twist_text(tw(4)), via(c), true, n == 2 ? 1800 : 0);
           }
       }},
      {9, "oracles: wick vs Fock, twisted trace series, shift rules vs Fock conjugation",
       [&](Outcome& o) {
         wick_oracle(o);
         trace_oracle(o);
         shift_oracle(o, FactorizationId::kSpinor, 2);
         shift_oracle(o, FactorizationId::kSpinor, 3);
         shift_oracle(o, FactorizationId::kFund, 2);
         shift_oracle(o, FactorizationId::kQuad, 3);
       }},
      {10, "mutants are rejected",
       [&](Outcome& o) {
         auto mut = [](RunConfig c, const std::string& m) {
           c.mutation = m;
           return via(c);
         };
         o.report("rtt spinor negate-entry", mut(verify("rtt", 3, "spinor-degenerate"), "negate-entry"), false);
         o.report("rtt fund negate-entry", mut(verify("rtt", 3, "fund-degenerate"), "negate-entry"), false);
         o.report("yangian negate-entry", mut(verify("yangian", 3, "spinor-full"), "negate-entry"), false);
         o.report("invariance with a single flipped sign", [] {
           auto ctx = make_context({});
           return check_invariance(mutate_negate_entry(build_B(ctx, {1, 1, 1}), 0, 0));
         }, false);
         o.report("so2r mutated generators", [] { return check_so2r_relations(mutated_spinor_generators(3)); }, false);
         o.report("characteristic mutated generators",
                  [] { return check_characteristic(RepKind::kSpinor, mutated_spinor_generators(3)); }, false);
         o.report("g-relation without kappa term", mut(verify("g-relation", 3), "drop-kappa"), false);
         for (auto id : {FactorizationId::kSpinor, FactorizationId::kQuad, FactorizationId::kFund})
           o.report(std::string("factorization shifted ") + factorization_name(id),
                    [id] { return check_factorization(id, 3, Rational(1)); }, false);
         o.report("dictionary swapped", mut(verify("dictionary", 3), "swapped"), false);
         o.report("Q at an inverted twist without conjugation", [] { return unconjugated_inverse_twist(3); }, false);
         {
           RunConfig c = qsys("qq", 4, 1, default_twists(4));
           o.report("qq wrong node", mut(c, "wrong-node"), false);
         }
         o.report("degenerate twists rejected", [] {
           return expect_error(ErrorCode::kPrecondition, [] {
             ChainSpec s{4, 1, {Rational(1, 2), Rational(1, 3), Rational(1, 5), Rational(1, 2)}};
             s.validate();
           }, "degenerate-twists");
         });
       }},
  };

  bool all_pass = true;
  for (const auto& c : all) {
    std::cerr << "criterion " << c.id << "\n";
    Outcome o;
    auto t0 = Clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("threw ") + e.what());
    }
    double dt = seconds_since(t0);
    char line[64];
    std::snprintf(line, sizeof line, "%.1f s", dt);
    std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << "  [" << line << "]"
              << std::endl;
    for (const auto& d : o.detail) std::cerr << "    " << d << "\n";
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
