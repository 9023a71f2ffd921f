#pragma once

#include <stdexcept>
#include <string>

namespace signalcast {

enum class ErrorCode {
  kConfig,    // bad configuration value or unknown name
  kInput,     // malformed or inconsistent input data
  kInternal,  // invariant violated inside the library
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

[[noreturn]] inline void throw_config(const std::string& msg) {
  throw Error(ErrorCode::kConfig, msg);
}
[[noreturn]] inline void throw_input(const std::string& msg) {
  throw Error(ErrorCode::kInput, msg);
}
[[noreturn]] inline void throw_internal(const std::string& msg) {
  throw Error(ErrorCode::kInternal, msg);
}

}  // namespace signalcast
