#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "osclax/opmatrix.hpp"

namespace osclax {

inline constexpr int kSchemaVersion = 1;
const char* tool_version();

struct Witness {
  std::string row;
  std::string col;
  std::size_t term_count = 0;
  std::string dump;
};

struct CheckReport {
  std::string check_id;
  std::string params = "{}";  // JSON object text
  bool pass = true;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;
  double elapsed_ms = 0.0;

  // Records a failure; witnesses beyond the configured limit are dropped.
  void add_witness(Witness w);
  // Every nonzero entry of the residual is a failure.
  void add_residual(const OpMatrix& residual, const std::string& prefix = "");
  // Merges the verdict and witnesses of a sub-check.
  void absorb(const CheckReport& sub);

  std::string to_json(bool with_timing = true) const;
  static CheckReport from_json(const std::string& text);
};

// Maximal number of witnesses kept per report (default 8).
void set_witness_limit(int n);
int witness_limit();

// Sets elapsed_ms on destruction.
class ReportTimer {
 public:
  explicit ReportTimer(CheckReport& r) : r_(r), start_(std::chrono::steady_clock::now()) {}
  ~ReportTimer() {
    r_.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }
  ReportTimer(const ReportTimer&) = delete;
  ReportTimer& operator=(const ReportTimer&) = delete;

 private:
  CheckReport& r_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace osclax
