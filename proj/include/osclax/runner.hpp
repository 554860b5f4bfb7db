#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osclax/qsystem.hpp"
#include "osclax/report.hpp"

namespace osclax {

// One batch command. Unset fields take per-command defaults.
struct RunConfig {
  std::string command;  // verify | qsys | suite
  std::string target;   // rtt, ..., build, commute, qq, paper-core, ...
  std::optional<int> rank;
  std::optional<std::string> family;
  std::optional<int> length;
  std::optional<std::vector<Rational>> twists;
  std::vector<int> signs;
  std::optional<std::pair<int, int>> swap;
  std::optional<unsigned> seed;
  std::optional<std::string> relation;
  std::optional<Rational> s;
  std::optional<Rational> n;
  // deliberately broken input: negate-entry (rtt, yangian), drop-kappa
  // (g-relation), shift (factorization), swapped (dictionary), wrong-node (qq)
  std::optional<std::string> mutation;
  bool long_run = false;
  bool dump = false;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
};

struct RunResult {
  CheckReport report;
  std::string dump;  // canonical dump of the constructed object when requested
};

std::vector<std::string> verify_targets();
std::vector<std::string> qsys_targets();
std::vector<std::string> suite_names();

// Throws osclax::Error for an invalid config; failing checks are reported.
RunResult run(const RunConfig& config);

}  // namespace osclax
