#pragma once

#include <stdexcept>
#include <string>

namespace mirror {

enum class ErrorCode {
  InvalidConfig,
  QuotaMismatch,
  BudgetExceeded,
  MalformedMove,
  OutOfRange,
  DegenerateModulus,
  InconsistentSketch,
  OddN,
  EvenN,
  Indivisible,
  TooLarge,
  NotModtown,
  DimensionMismatch,
  UnknownStrategy,
};

const char* to_string(ErrorCode code);

class MirrorError : public std::runtime_error {
 public:
  MirrorError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mirror
