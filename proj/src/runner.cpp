#include "osclax/runner.hpp"

#include <algorithm>

#include "json.hpp"
#include "osclax/error.hpp"
#include "osclax/verify.hpp"

namespace osclax {

using Json = nlohmann::ordered_json;

std::string RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  j["target"] = target;
  if (rank) j["rank"] = *rank;
  if (family) j["family"] = *family;
  if (length) j["length"] = *length;
  if (twists) {
    auto ts = Json::array();
    for (const auto& t : *twists) ts.push_back(t.str());
    j["twists"] = ts;
  }
  if (!signs.empty()) j["signs"] = signs;
  if (swap) j["swap"] = {swap->first, swap->second};
  if (seed) j["seed"] = *seed;
  if (relation) j["relation"] = *relation;
  if (s) j["s"] = s->str();
  if (n) j["n"] = n->str();
  if (mutation) j["mutation"] = *mutation;
  if (long_run) j["long"] = true;
  if (dump) j["dump"] = true;
  return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
  RunConfig c;
  static const std::vector<std::string> known = {"command", "target", "rank", "family", "length", "twists", "signs",
                                                 "swap", "seed", "relation", "s", "n", "mutation", "long", "dump"};
  try {
    auto j = nlohmann::json::parse(text);
    require(j.is_object(), ErrorCode::kParse, "run config must be a JSON object");
    for (const auto& [k, v] : j.items())
      require(std::find(known.begin(), known.end(), k) != known.end(), ErrorCode::kParse, "unknown config key: " + k);
    c.command = j.at("command").get<std::string>();
    c.target = j.value("target", std::string());
    if (j.contains("rank")) c.rank = j["rank"].get<int>();
    if (j.contains("family")) c.family = j["family"].get<std::string>();
    if (j.contains("length")) c.length = j["length"].get<int>();
    if (j.contains("twists")) {
      std::vector<Rational> ts;
      for (const auto& t : j["twists"]) ts.push_back(t.is_string() ? Rational::parse(t.get<std::string>()) : Rational(t.get<long long>()));
      c.twists = ts;
    }
    if (j.contains("signs")) c.signs = j["signs"].get<std::vector<int>>();
    if (j.contains("swap")) {
      auto v = j["swap"].get<std::vector<int>>();
      require(v.size() == 2, ErrorCode::kParse, "swap needs two indices");
      c.swap = std::make_pair(v[0], v[1]);
    }
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned>();
    if (j.contains("relation")) c.relation = j["relation"].get<std::string>();
    if (j.contains("s")) c.s = Rational::parse(j["s"].get<std::string>());
    if (j.contains("n")) c.n = Rational::parse(j["n"].get<std::string>());
    if (j.contains("mutation")) c.mutation = j["mutation"].get<std::string>();
    c.long_run = j.value("long", false);
    c.dump = j.value("dump", false);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad run config: ") + e.what());
  }
  return c;
}

std::vector<std::string> verify_targets() {
  return {"rtt",      "yangian",    "invariance",      "characteristic", "g-relation",   "factorization",
          "limit",    "so2r",       "appendix",        "dictionary",     "spinor-products", "weight-action",
          "absorption", "factor-consistency"};
}

std::vector<std::string> qsys_targets() { return {"build", "commute", "qq"}; }

std::vector<std::string> suite_names() { return {"paper-core", "paper-full", "stretch"}; }

namespace {

int rank_of(const RunConfig& c, int fallback) {
  int r = c.rank.value_or(fallback);
  require(r >= 2 && r <= 5, ErrorCode::kInvalidArgument, "rank must be in 2..5, got " + std::to_string(r));
  return r;
}

LaxSpec lax_spec_of(const RunConfig& c) {
  LaxSpec s;
  s.family = parse_family(c.family.value_or("spinor-degenerate"));
  s.rank = rank_of(c, 3);
  s.signs = c.signs;
  s.swap = c.swap;
  s.s = c.s;
  s.n = c.n;
  if (s.family == LaxFamily::kFundFull && !s.s) s.s = Rational(0);
  s.validate();
  return s;
}

CheckReport aggregate(const std::string& id, const std::string& params, const std::vector<CheckReport>& parts) {
  CheckReport rep;
  rep.check_id = id;
  rep.params = params;
  double ms = 0;
  for (const auto& p : parts) {
    rep.absorb(p);
    rep.notes.push_back(p.check_id + " " + Json::parse(p.params).dump() + ": " + (p.pass ? "pass" : "fail"));
    ms += p.elapsed_ms;
  }
  rep.elapsed_ms = ms;
  return rep;
}

ChainSpec chain_of(const RunConfig& c) {
  ChainSpec spec;
  spec.rank = c.rank.value_or(4);
  spec.length = c.length.value_or(1);
  require(spec.rank >= 2 && spec.rank <= 5, ErrorCode::kInvalidArgument, "rank must be in 2..5");
  if (c.twists) {
    spec.twists = *c.twists;
  } else if (c.seed) {
    spec.twists = random_twists(spec.rank, *c.seed);
  } else {
    spec.twists = default_twists(spec.rank);
  }
  spec.validate();
  return spec;
}

QSelector selector_of(const RunConfig& c, const ChainSpec& spec) {
  QSelector sel;
  sel.family = parse_qfamily(c.family.value_or("spinor"));
  if (sel.family == QFamily::kSpinor) {
    if (!c.signs.empty()) {
      require(static_cast<int>(c.signs.size()) == spec.rank, ErrorCode::kInvalidArgument, "signs must have rank entries");
      for (int i = 0; i < spec.rank; ++i) {
        int v = c.signs[static_cast<std::size_t>(i)];
        require(v == 1 || v == -1, ErrorCode::kInvalidArgument, "signs must be +1 or -1");
        if (v == -1) sel.minus.push_back(i + 1);
      }
    }
  } else if (sel.family == QFamily::kFundI || sel.family == QFamily::kFundBarI) {
    require(c.swap.has_value() && c.swap->second == spec.rank, ErrorCode::kInvalidArgument,
            "fund-i needs --swap i," + std::to_string(spec.rank));
    sel.node = c.swap->first;
  }
  return sel;
}

std::vector<QSelector> default_selectors(int r) {
  return {{QFamily::kSpinor, {}, 0},  {QFamily::kSpinor, {1}, 0}, {QFamily::kFund, {}, 0},
          {QFamily::kFundBar, {}, 0}, {QFamily::kFundI, {}, 1},   {QFamily::kFundBarI, {}, r - 1}};
}

// First entry carrying oscillators, negated.
OpMatrix negate_first_operator_entry(const OpMatrix& l) {
  for (const auto& [k, e] : l.entries())
    if (!e.is_scalar() && !e.is_zero()) return mutate_negate_entry(l, k.first, k.second);
  fail(ErrorCode::kInvalidArgument, "negate-entry: no oscillator entry");
}

void allow_mutation(const RunConfig& c, const std::string& name) {
  if (!c.mutation) return;
  require(*c.mutation == name, ErrorCode::kInvalidArgument,
          "mutation '" + *c.mutation + "' does not apply to " + c.command + " " + c.target);
}

std::string with_mutation(const std::string& params, const RunConfig& c) {
  if (!c.mutation) return params;
  Json p = Json::parse(params);
  p["mutation"] = *c.mutation;
  return p.dump();
}

RunResult run_verify(const RunConfig& c) {
  const std::string& t = c.target;
  RunResult out;
  if (t == "rtt" || t == "yangian") {
    allow_mutation(c, "negate-entry");
  } else if (t == "g-relation") {
    allow_mutation(c, "drop-kappa");
  } else if (t == "factorization") {
    allow_mutation(c, "shift");
  } else if (t == "dictionary") {
    allow_mutation(c, "swapped");
  } else {
    allow_mutation(c, "");
  }
  if (t == "rtt" || t == "yangian" || t == "factor-consistency") {
    LaxSpec spec = lax_spec_of(c);
    auto ctx = lax_context(spec);
    OpMatrix l = build_lax(spec, ctx, "z");
    if (c.mutation) l = negate_first_operator_entry(l);
    if (t == "rtt") {
      out.report = check_rtt(l, "z", with_mutation(spec.to_json(), c));
    } else if (t == "yangian") {
      out.report = check_yangian_components(l, "z", with_mutation(spec.to_json(), c));
    } else {
      out.report = check_factor_consistency(spec);
    }
    if (c.dump) out.dump = l.dump();
    return out;
  }
  if (t == "invariance") {
    int r = rank_of(c, 3);
    auto ctx = make_context({});
    Json p;
    p["rank"] = r;
    std::vector<CheckReport> parts;
    auto one = [&](const OpMatrix& b, Json params) {
      params["rank"] = r;
      parts.push_back(check_invariance(b, params.dump()));
    };
    if (!c.signs.empty()) {
      require(static_cast<int>(c.signs.size()) == r, ErrorCode::kInvalidArgument, "signs must have rank entries");
      one(build_B(ctx, c.signs), Json{{"signs", c.signs}});
    }
    if (c.swap) one(build_Btilde(ctx, r, c.swap->first, c.swap->second), Json{{"swap", {c.swap->first, c.swap->second}}});
    if (c.signs.empty() && !c.swap) {
      for (int mask = 0; mask < (1 << r); ++mask) {
        std::vector<int> alpha;
        for (int i = 0; i < r; ++i) alpha.push_back(mask >> i & 1 ? -1 : 1);
        one(build_B(ctx, alpha), Json{{"signs", alpha}});
      }
      for (int i = 1; i <= r; ++i)
        for (int j = i + 1; j <= r; ++j) one(build_Btilde(ctx, r, i, j), Json{{"swap", {i, j}}});
    }
    out.report = parts.size() == 1 ? parts[0] : aggregate("invariance", p.dump(), parts);
    return out;
  }
  int r = rank_of(c, 3);
  Json p;
  p["rank"] = r;
  std::string fam = c.family.value_or("");
  if (t == "characteristic") {
    std::vector<CheckReport> parts;
    if (fam.empty() || fam == "spinor-full" || fam == "spinor") parts.push_back(check_characteristic(RepKind::kSpinor, r));
    if (fam.empty() || fam == "fund-full" || fam == "fund") parts.push_back(check_characteristic(RepKind::kFundamental, r));
    require(!parts.empty(), ErrorCode::kInvalidArgument, "characteristic: family must be spinor-full or fund-full");
    out.report = parts.size() == 1 ? parts[0] : aggregate("characteristic", p.dump(), parts);
  } else if (t == "g-relation") {
    out.report = check_G_relation(r, c.mutation.has_value());
  } else if (t == "factorization") {
    Rational shift = c.mutation ? Rational(1) : Rational(0);
    std::vector<CheckReport> parts;
    if (fam.empty() || fam == "spinor" || fam == "spinor-full") parts.push_back(check_factorization(FactorizationId::kSpinor, r, shift));
    if (fam.empty() || fam == "quad" || fam == "quad-with-spinor") {
      // skipped silently at r = 2 unless asked for explicitly
      if (!fam.empty()) require(r >= 3, ErrorCode::kInvalidArgument, "quad factorization needs rank >= 3");
      if (r >= 3) parts.push_back(check_factorization(FactorizationId::kQuad, r, shift));
    }
    if (fam.empty() || fam == "fund" || fam == "fund-full") parts.push_back(check_factorization(FactorizationId::kFund, r, shift));
    require(!parts.empty(), ErrorCode::kInvalidArgument, "factorization: family must be spinor, quad or fund");
    out.report = parts.size() == 1 ? parts[0] : aggregate("factorization", p.dump(), parts);
  } else if (t == "limit") {
    std::vector<CheckReport> parts;
    if (fam.empty() || fam == "spinor" || fam == "spinor-full") parts.push_back(check_limit(RepKind::kSpinor, r));
    if (fam.empty() || fam == "fund" || fam == "fund-full") parts.push_back(check_limit(RepKind::kFundamental, r));
    require(!parts.empty(), ErrorCode::kInvalidArgument, "limit: family must be spinor-full or fund-full");
    out.report = parts.size() == 1 ? parts[0] : aggregate("limit", p.dump(), parts);
  } else if (t == "so2r") {
    LaxSpec spec;
    spec.family = parse_family(fam.empty() ? "spinor-full" : fam);
    spec.rank = r;
    require(spec.family == LaxFamily::kSpinorFull || spec.family == LaxFamily::kFundFull, ErrorCode::kInvalidArgument,
            "so2r: family must be spinor-full or fund-full");
    if (spec.family == LaxFamily::kFundFull) spec.s = c.s.value_or(Rational(0));
    auto ctx = lax_context(spec);
    OpMatrix l = build_lax(spec, ctx, "z");
    int zi = ctx->ring->index("z");
    GeneratorSet g = spec.family == LaxFamily::kSpinorFull ? extract_generators(l, zi) : extract_quadratic_generators(l, zi).F;
    out.report = check_so2r_relations(g, spec.to_json());
  } else if (t == "appendix") {
    out.report = check_appendix(r);
  } else if (t == "dictionary") {
    require(r == 3, ErrorCode::kInvalidArgument, "dictionary: rank must be 3");
    out.report = check_d3_dictionary(c.mutation.has_value());
  } else if (t == "spinor-products") {
    out.report = check_spinor_products(r);
  } else if (t == "weight-action") {
    out.report = check_weight_action(r, c.s.value_or(Rational(3, 2)));
  } else if (t == "absorption") {
    std::vector<CheckReport> parts;
    if (fam.empty() || fam == "spinor") parts.push_back(check_absorption(r, false));
    if (fam.empty() || fam == "fund") parts.push_back(check_absorption(r, true));
    require(!parts.empty(), ErrorCode::kInvalidArgument, "absorption: family must be spinor or fund");
    out.report = parts.size() == 1 ? parts[0] : aggregate("absorption", p.dump(), parts);
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown verify target: " + t);
  }
  return out;
}

RunResult run_qsys(const RunConfig& c) {
  RunResult out;
  ChainSpec spec = chain_of(c);
  if (c.target != "qq") allow_mutation(c, "");
  if (c.target == "build") {
    std::string fam = c.family.value_or("spinor");
    CheckReport rep;
    rep.check_id = "qsys-build";
    Json p = Json::parse(spec.to_json());
    p["family"] = fam;
    ReportTimer timer(rep);
    QuantumOperator op;
    if (fam == "transfer") {
      op = transfer_matrix(spec, "x");
      rep.notes.push_back("spectral degree " + std::to_string(op.degree(op.ring()->index("x"))));
    } else if (fam == "q0") {
      op = q_zero(spec, "z");
    } else {
      QSelector sel = selector_of(c, spec);
      p["operator"] = sel.label();
      auto res = q_operator(spec, sel, "z");
      op = std::move(res.op);
      rep.notes.push_back("normalization " + res.normalization.str());
    }
    if (fam != "transfer") rep.notes.push_back("spectral degree " + std::to_string(op.degree(op.ring()->index("z"))));
    rep.params = p.dump();
    rep.notes.push_back("dimension " + std::to_string(op.dim()) + ", nonzero entries " + std::to_string(op.nonzeros()));
    if (c.dump) out.dump = op.dump();
    out.report = std::move(rep);
  } else if (c.target == "commute") {
    std::vector<QSelector> sels = c.family ? std::vector<QSelector>{selector_of(c, spec)} : default_selectors(spec.rank);
    out.report = check_commuting(spec, sels);
  } else if (c.target == "qq") {
    std::string rel = c.relation.value_or("all");
    QQOptions opt;
    require(rel == "all" || rel == "spinor1" || rel == "spinor2" || rel == "fund", ErrorCode::kInvalidArgument,
            "relation must be all, spinor1, spinor2 or fund");
    opt.spinor2 = rel == "all" || rel == "spinor2";
    opt.fund = rel == "all" || rel == "fund";
    allow_mutation(c, "wrong-node");
    opt.wrong_node = c.mutation.has_value();
    require(spec.length <= 2 || c.long_run, ErrorCode::kInvalidArgument, "qq with length > 2 needs --long");
    out.report = qq_check(spec, opt);
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown qsys target: " + c.target);
  }
  return out;
}

RunConfig cfg(const std::string& command, const std::string& target) {
  RunConfig c;
  c.command = command;
  c.target = target;
  return c;
}

RunConfig with_rank(RunConfig c, int r) {
  c.rank = r;
  return c;
}

RunConfig with_family(RunConfig c, const std::string& f) {
  c.family = f;
  return c;
}

RunConfig chain(RunConfig c, int r, int n, const std::optional<std::vector<Rational>>& tw) {
  c.rank = r;
  c.length = n;
  c.twists = tw;
  return c;
}

std::vector<RunConfig> suite_members(const std::string& name, const RunConfig& base) {
  std::vector<RunConfig> m;
  std::vector<Rational> second4 = random_twists(4, base.seed.value_or(1)), second3 = random_twists(3, base.seed.value_or(1));
  bool full = name == "paper-full";
  if (name == "paper-core" || full) {
    for (int r : {2, 3, 4}) m.push_back(with_rank(with_family(cfg("verify", "rtt"), "spinor-degenerate"), r));
    if (full) m.push_back(with_rank(with_family(cfg("verify", "rtt"), "spinor-degenerate"), 5));
    m.push_back(with_rank(with_family(cfg("verify", "rtt"), "fund-degenerate"), 3));
    if (full) m.push_back(with_rank(with_family(cfg("verify", "rtt"), "fund-degenerate"), 4));
    m.push_back(with_rank(with_family(cfg("verify", "rtt"), "d3-level3"), 3));
    m.push_back(with_rank(with_family(cfg("verify", "rtt"), "d3-level2"), 3));
    m.push_back(with_rank(cfg("verify", "dictionary"), 3));
    if (full)
      for (const char* f : {"spinor-full", "quad-with-spinor", "fund-full"}) {
        m.push_back(with_rank(with_family(cfg("verify", "rtt"), f), 3));
        m.push_back(with_rank(with_family(cfg("verify", "yangian"), f), 3));
      }
    std::vector<int> ranks = full ? std::vector<int>{3, 4, 5} : std::vector<int>{3, 4};
    for (int r : ranks) {
      m.push_back(with_rank(with_family(cfg("verify", "so2r"), "spinor-full"), r));
      m.push_back(with_rank(with_family(cfg("verify", "so2r"), "fund-full"), r));
      m.push_back(with_rank(cfg("verify", "characteristic"), r));
      m.push_back(with_rank(cfg("verify", "g-relation"), r));
    }
    for (int r : {3, 4}) {
      m.push_back(with_rank(cfg("verify", "factorization"), r));
      m.push_back(with_rank(cfg("verify", "limit"), r));
    }
    for (int r : {2, 3, 4}) m.push_back(with_rank(cfg("verify", "appendix"), r));
    m.push_back(with_rank(cfg("verify", "invariance"), 3));
    if (full) {
      for (int r : {2, 4}) m.push_back(with_rank(cfg("verify", "invariance"), r));
      for (int r : {3, 4}) {
        m.push_back(with_rank(cfg("verify", "absorption"), r));
        m.push_back(with_rank(cfg("verify", "spinor-products"), r));
        m.push_back(with_rank(cfg("verify", "weight-action"), r));
      }
    }
    std::vector<std::optional<std::vector<Rational>>> pts3 = {std::nullopt}, pts4 = {std::nullopt};
    if (full) {
      pts3.push_back(second3);
      pts4.push_back(second4);
    }
    for (const auto& tw : pts3)
      for (int n : {1, 2}) m.push_back(chain(cfg("qsys", "commute"), 3, n, tw));
    for (const auto& tw : pts4) {
      m.push_back(chain(cfg("qsys", "commute"), 4, 1, tw));
      for (int n : {1, 2}) m.push_back(chain(cfg("qsys", "qq"), 4, n, tw));
    }
  } else if (name == "stretch") {
    if (!base.long_run) return m;
    RunConfig q = chain(cfg("qsys", "qq"), 4, 3, std::nullopt);
    q.long_run = true;
    m.push_back(q);
    m.push_back(with_rank(with_family(cfg("verify", "so2r"), "fund-full"), 5));
    m.push_back(with_rank(cfg("verify", "characteristic"), 5));
    m.push_back(with_rank(with_family(cfg("verify", "rtt"), "fund-degenerate"), 5));
    m.push_back(with_rank(with_family(cfg("verify", "rtt"), "fund-full"), 4));
  } else {
    fail(ErrorCode::kInvalidArgument, "unknown suite: " + name);
  }
  return m;
}

RunResult run_suite(const RunConfig& c) {
  allow_mutation(c, "");
  Json p;
  p["suite"] = c.target;
  if (c.seed) p["seed"] = *c.seed;
  if (c.long_run) p["long"] = true;
  auto members = suite_members(c.target, c);
  RunResult out;
  if (members.empty()) {
    CheckReport rep;
    rep.check_id = "suite-" + c.target;
    rep.params = p.dump();
    rep.notes.push_back("skipped: requires --long");
    out.report = rep;
    return out;
  }
  std::vector<CheckReport> parts;
  for (const auto& m : members) parts.push_back(run(m).report);
  out.report = aggregate("suite-" + c.target, p.dump(), parts);
  return out;
}

}  // namespace

RunResult run(const RunConfig& config) {
  if (config.command == "verify") return run_verify(config);
  if (config.command == "qsys") return run_qsys(config);
  if (config.command == "suite") return run_suite(config);
  fail(ErrorCode::kInvalidArgument, "unknown command: " + config.command);
}

}  // namespace osclax
