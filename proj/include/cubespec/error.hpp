#pragma once

#include <stdexcept>
#include <string>

namespace cubespec {

enum class ErrorCode {
  kInvalidArgument = 1,
  kOutOfRange = 2,
  kIo = 3,
  kParse = 4,
  kSchema = 5,
};

// Every failure raised by the library carries one of the codes above so the
// C layer can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace cubespec
