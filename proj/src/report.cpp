#include "osclax/report.hpp"

#include <atomic>

#include "json.hpp"
#include "osclax/error.hpp"

namespace osclax {

namespace {
std::atomic<int> g_witness_limit{8};
}

const char* tool_version() { return "0.1.0"; }

void set_witness_limit(int n) { g_witness_limit = n < 0 ? 0 : n; }
int witness_limit() { return g_witness_limit; }

void CheckReport::add_witness(Witness w) {
  pass = false;
  if (static_cast<int>(witnesses.size()) < witness_limit()) witnesses.push_back(std::move(w));
}

void CheckReport::add_residual(const OpMatrix& residual, const std::string& prefix) {
  for (const auto& [key, e] : residual.entries()) {
    if (e.is_zero()) continue;
    add_witness({prefix + residual.index_label(key.first), residual.index_label(key.second), e.term_count(), e.str()});
  }
}

void CheckReport::absorb(const CheckReport& sub) {
  if (!sub.pass) {
    pass = false;
    for (const auto& w : sub.witnesses) {
      if (static_cast<int>(witnesses.size()) >= witness_limit()) break;
      witnesses.push_back(w);
    }
  }
  for (const auto& n : sub.notes) notes.push_back(sub.check_id + ": " + n);
}

std::string CheckReport::to_json(bool with_timing) const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["check_id"] = check_id;
  j["params"] = nlohmann::ordered_json::parse(params);
  j["status"] = pass ? "pass" : "fail";
  auto ws = nlohmann::ordered_json::array();
  for (const auto& w : witnesses) {
    nlohmann::ordered_json x;
    x["row"] = w.row;
    x["col"] = w.col;
    x["term_count"] = w.term_count;
    x["dump"] = w.dump;
    ws.push_back(x);
  }
  j["witnesses"] = ws;
  if (!notes.empty()) j["notes"] = notes;
  j["elapsed_ms"] = with_timing ? elapsed_ms : 0.0;
  j["tool_version"] = tool_version();
  return j.dump(2);
}

CheckReport CheckReport::from_json(const std::string& text) {
  CheckReport r;
  try {
    auto j = nlohmann::json::parse(text);
    r.check_id = j.at("check_id").get<std::string>();
    r.params = j.at("params").dump();
    r.pass = j.at("status").get<std::string>() == "pass";
    for (const auto& w : j.at("witnesses"))
      r.witnesses.push_back({w.at("row").get<std::string>(), w.at("col").get<std::string>(),
                             w.at("term_count").get<std::size_t>(), w.at("dump").get<std::string>()});
    if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("bad report JSON: ") + e.what());
  }
  return r;
}

}  // namespace osclax
