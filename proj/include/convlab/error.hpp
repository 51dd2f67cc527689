#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace convlab {

enum class ErrorCode {
  UnknownSymbol,
  OutOfDomain,
  DomainMismatch,
  NonIntegrable,
  EmptyRegion,
  HypothesisViolated,
  IndexOutOfRange,
  UnsupportedFamily,
  UnknownFamily,
  BudgetExhausted,
  UnknownScenario,
  IoFailure,
  InvalidArgument,
  AuditFailure,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes the
/// failure classes callers are expected to branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace convlab
