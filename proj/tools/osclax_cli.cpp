// Batch front-end over the C API. Exit codes: 0 all checks pass, 1 a check
// failed, 2 usage or invalid configuration, 3 internal error.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "osclax/osclax.h"

namespace {

constexpr const char* kOutDirEnv = "OSCLAX_OUT_DIR";

struct Options {
  std::optional<int> rank, length, threads;
  std::optional<unsigned> seed;
  std::string family, twists, signs, swap, out, dump, relation, s, n, mutation;
  bool long_run = false;
};

std::vector<long long> parse_ints(const std::string& text, const char* flag) {
  std::vector<long long> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "expected a comma-separated integer list, got '" + text + "'");
    }
  }
  return v;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--rank", o.rank, "rank r of so(2r)");
  app->add_option("--family", o.family, "Lax family, Q family or check variant");
  app->add_option("--length", o.length, "chain length N");
  app->add_option("--twists", o.twists, "twists t1,...,tr as rationals, e.g. 1/2,1/3,1/5,1/7");
  app->add_option("--signs", o.signs, "sign vector alpha, e.g. 1,-1,1");
  app->add_option("--swap", o.swap, "index pair i,j of the Btilde conjugation");
  app->add_option("--seed", o.seed, "seed for a random twist point");
  app->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  app->add_option("--out", o.out, std::string("report path (default: $") + kOutDirEnv + "/<check>.json or stdout)");
  app->add_option("--dump", o.dump, "write the canonical dump of the constructed object to this path");
  app->add_option("--relation", o.relation, "QQ relation: all, spinor1, spinor2, fund");
  app->add_option("--s", o.s, "representation label s");
  app->add_option("--n", o.n, "representation label n");
  app->add_option("--mutation", o.mutation, "deliberately broken input (mutation testing)");
  app->add_flag("--long", o.long_run, "allow long-running checks");
}

nlohmann::ordered_json make_config(const std::string& command, const std::string& target, const Options& o) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["target"] = target;
  if (o.rank) j["rank"] = *o.rank;
  if (!o.family.empty()) j["family"] = o.family;
  if (o.length) j["length"] = *o.length;
  if (!o.twists.empty()) {
    auto ts = nlohmann::ordered_json::array();
    std::stringstream ss(o.twists);
    std::string item;
    while (std::getline(ss, item, ',')) ts.push_back(item);
    j["twists"] = ts;
  }
  if (!o.signs.empty()) j["signs"] = parse_ints(o.signs, "--signs");
  if (!o.swap.empty()) {
    auto v = parse_ints(o.swap, "--swap");
    if (v.size() != 2) throw CLI::ValidationError("--swap", "expected two indices");
    j["swap"] = v;
  }
  if (o.seed) j["seed"] = *o.seed;
  if (!o.relation.empty()) j["relation"] = o.relation;
  if (!o.s.empty()) j["s"] = o.s;
  if (!o.n.empty()) j["n"] = o.n;
  if (!o.mutation.empty()) j["mutation"] = o.mutation;
  if (o.long_run) j["long"] = true;
  if (!o.dump.empty()) j["dump"] = true;
  return j;
}

bool write_file(const std::filesystem::path& p, const std::string& text) {
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream f(p);
  if (!f) return false;
  f << text;
  return static_cast<bool>(f);
}

int execute(const std::string& command, const std::string& target, const Options& o) {
  if (o.threads) osclax_set_threads(*o.threads);
  std::string config = make_config(command, target, o).dump();
  osclax_report* rep = nullptr;
  osclax_status st = osclax_run(config.c_str(), &rep);
  if (st != OSCLAX_OK) {
    std::cerr << "error (" << osclax_status_name(st) << "): " << osclax_last_error() << "\n";
    return st == OSCLAX_E_INTERNAL ? 3 : 2;
  }
  char* json = osclax_report_json(rep, 1);
  std::string text = std::string(json) + "\n";
  osclax_string_free(json);
  bool pass = osclax_report_passed(rep) != 0;
  std::string check_id = nlohmann::json::parse(text).at("check_id").get<std::string>();

  std::filesystem::path out;
  if (!o.out.empty()) {
    out = o.out;
  } else if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) {
    out = std::filesystem::path(dir) / (check_id + ".json");
  }
  int code = pass ? 0 : 1;
  if (out.empty()) {
    std::cout << text;
  } else if (!write_file(out, text)) {
    std::cerr << "error: cannot write " << out << "\n";
    code = 3;
  } else {
    std::cout << check_id << ": " << (pass ? "pass" : "fail") << " -> " << out.string() << "\n";
  }
  if (!o.dump.empty()) {
    char* d = osclax_report_dump(rep);
    std::string dump_text = d ? d : "";
    osclax_string_free(d);
    if (!write_file(o.dump, dump_text)) {
      std::cerr << "error: cannot write " << o.dump << "\n";
      code = 3;
    }
  }
  osclax_report_free(rep);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillator Lax matrices for so(2r): exact identity checks and Q-operators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(osclax_version()));

  Options o;
  std::string target;

  auto* verify = app.add_subcommand("verify", "run an identity check");
  verify->add_option("check", target, "rtt, yangian, invariance, characteristic, g-relation, factorization, limit, "
                                      "so2r, appendix, dictionary, spinor-products, weight-action, absorption, "
                                      "factor-consistency")
      ->required()
      ->check(CLI::IsMember({"rtt", "yangian", "invariance", "characteristic", "g-relation", "factorization", "limit",
                             "so2r", "appendix", "dictionary", "spinor-products", "weight-action", "absorption",
                             "factor-consistency"}));
  add_common(verify, o);

  auto* qsys = app.add_subcommand("qsys", "build or check chain operators");
  qsys->add_option("action", target, "build, commute, qq")->required()->check(CLI::IsMember({"build", "commute", "qq"}));
  add_common(qsys, o);

  auto* suite = app.add_subcommand("suite", "run a bundle of checks");
  suite->add_option("name", target, "paper-core, paper-full, stretch")
      ->required()
      ->check(CLI::IsMember({"paper-core", "paper-full", "stretch"}));
  add_common(suite, o);

  try {
    app.parse(argc, argv);
    std::string command = verify->parsed() ? "verify" : qsys->parsed() ? "qsys" : "suite";
    return execute(command, target, o);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return 2;
  }
}
