#include "osclax/osclax.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "json.hpp"
#include "osclax/error.hpp"
#include "osclax/parallel.hpp"
#include "osclax/runner.hpp"
#include "osclax/verify.hpp"

struct osclax_report {
  osclax::CheckReport rep;
  std::string dump;
};

struct osclax_lax {
  osclax::LaxSpec spec;
  osclax::OpMatrix l;
};

struct osclax_qop {
  osclax::QuantumOperator q;
};

namespace {

thread_local std::string g_error;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
osclax_status guard(F&& f) {
  g_error.clear();
  try {
    f();
    return OSCLAX_OK;
  } catch (const osclax::Error& e) {
    g_error = e.what();
    return static_cast<osclax_status>(static_cast<int>(e.code()));
  } catch (const std::exception& e) {
    g_error = e.what();
    return OSCLAX_E_INTERNAL;
  } catch (...) {
    g_error = "unknown error";
    return OSCLAX_E_INTERNAL;
  }
}

osclax_status null_arg(const char* what) {
  g_error = std::string(what) + " is NULL";
  return OSCLAX_E_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* osclax_version(void) { return osclax::tool_version(); }
int osclax_schema_version(void) { return osclax::kSchemaVersion; }
const char* osclax_last_error(void) { return g_error.c_str(); }

const char* osclax_status_name(osclax_status s) {
  switch (s) {
    case OSCLAX_OK: return "ok";
    case OSCLAX_E_INTERNAL: return "internal";
    default: return osclax::error_code_name(static_cast<osclax::ErrorCode>(s));
  }
}

void osclax_set_threads(int n) { osclax::set_thread_count(n); }
void osclax_set_witness_limit(int n) { osclax::set_witness_limit(n); }

osclax_status osclax_run(const char* config_json, osclax_report** out) {
  if (!config_json) return null_arg("config_json");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] {
    auto res = osclax::run(osclax::RunConfig::from_json(config_json));
    *out = new osclax_report{std::move(res.report), std::move(res.dump)};
  });
}

int osclax_report_passed(const osclax_report* r) { return r && r->rep.pass ? 1 : 0; }

char* osclax_report_json(const osclax_report* r, int with_timing) {
  return r ? dup(r->rep.to_json(with_timing != 0)) : nullptr;
}

char* osclax_report_dump(const osclax_report* r) { return r && !r->dump.empty() ? dup(r->dump) : nullptr; }

void osclax_report_free(osclax_report* r) { delete r; }

osclax_status osclax_lax_new(const char* spec_json, osclax_lax** out) {
  if (!spec_json) return null_arg("spec_json");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] {
    auto spec = osclax::LaxSpec::from_json(spec_json);
    auto ctx = osclax::lax_context(spec);
    *out = new osclax_lax{spec, osclax::build_lax(spec, ctx, "z")};
  });
}

int osclax_lax_dim(const osclax_lax* l) { return l ? l->l.dim() : 0; }

char* osclax_lax_entry(const osclax_lax* l, int row, int col) {
  if (!l || row < 0 || col < 0 || row >= l->l.dim() || col >= l->l.dim()) return nullptr;
  return dup(l->l.at(row, col).str());
}

char* osclax_lax_dump(const osclax_lax* l) { return l ? dup(l->l.dump()) : nullptr; }

osclax_status osclax_lax_check(const osclax_lax* l, const char* check, osclax_report** out) {
  if (!l) return null_arg("lax");
  if (!check) return null_arg("check");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] {
    std::string c = check;
    osclax::CheckReport rep;
    if (c == "rtt") {
      rep = osclax::check_rtt(l->l, "z", l->spec.to_json());
    } else if (c == "yangian") {
      rep = osclax::check_yangian_components(l->l, "z", l->spec.to_json());
    } else {
      osclax::fail(osclax::ErrorCode::kInvalidArgument, "unknown Lax check: " + c);
    }
    *out = new osclax_report{std::move(rep), {}};
  });
}

void osclax_lax_free(osclax_lax* l) { delete l; }

osclax_status osclax_qop_new(const char* chain_json, const char* family, const int* minus, int n_minus, int node,
                             osclax_qop** out) {
  if (!chain_json) return null_arg("chain_json");
  if (!family) return null_arg("family");
  if (!out) return null_arg("out");
  if (n_minus > 0 && !minus) return null_arg("minus");
  *out = nullptr;
  return guard([&] {
    auto spec = osclax::ChainSpec::from_json(chain_json);
    std::string f = family;
    osclax::QuantumOperator q;
    if (f == "transfer") {
      q = osclax::transfer_matrix(spec, "x");
    } else if (f == "q0") {
      q = osclax::q_zero(spec, "z");
    } else {
      osclax::QSelector sel;
      sel.family = osclax::parse_qfamily(f);
      for (int k = 0; k < n_minus; ++k) sel.minus.push_back(minus[k]);
      sel.node = node;
      q = osclax::q_operator(spec, sel, "z").op;
    }
    *out = new osclax_qop{std::move(q)};
  });
}

int osclax_qop_dim(const osclax_qop* q) { return q ? q->q.dim() : 0; }

char* osclax_qop_entry(const osclax_qop* q, int row, int col) {
  if (!q || row < 0 || col < 0 || row >= q->q.dim() || col >= q->q.dim()) return nullptr;
  return dup(q->q.at(row, col).str());
}

char* osclax_qop_dump(const osclax_qop* q) { return q ? dup(q->q.dump()) : nullptr; }

osclax_status osclax_qop_commutes(const osclax_qop* a, const osclax_qop* b, int* commutes) {
  if (!a || !b) return null_arg("operator");
  if (!commutes) return null_arg("commutes");
  return guard([&] { *commutes = osclax::commutator(a->q, b->q).is_zero() ? 1 : 0; });
}

void osclax_qop_free(osclax_qop* q) { delete q; }

void osclax_string_free(char* s) { std::free(s); }

}  // extern "C"
