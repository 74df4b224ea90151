#pragma once

#include <stdexcept>
#include <string>

namespace hamdeck {

/// Failure categories. The CLI maps these onto exit codes.
enum class ErrorKind {
  kInvalidInput,     // malformed input or parameter out of range
  kPrecondition,     // input well-formed but violates an operation's hypothesis
  kCapExceeded,      // exact/exhaustive mode requested above its size cap
  kInfeasible,       // the requested object provably does not exist
  kBudgetExhausted,  // retry, node or time budget ran out before an answer
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kCapExceeded: return "cap-exceeded";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kBudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace hamdeck
