#pragma once

#include <stdexcept>
#include <string>

namespace osclax {

enum class ErrorCode {
  kInvalidArgument = 1,
  kContextMismatch = 2,
  kDivergentTrace = 3,
  kNotHomomorphic = 4,
  kStructural = 5,
  kPrecondition = 6,
  kParse = 7,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace osclax
