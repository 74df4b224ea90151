#pragma once

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>

#include "hamdeck/error.hpp"

namespace hamdeck {

/// Wall-clock cap shared by long-running searches. Default-constructed means
/// unlimited.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds budget) : end_(Clock::now() + budget) {}

  /// Reads HAMDECK_BUDGET_MS; unset or unparsable means unlimited.
  static Deadline from_env() {
    const char* raw = std::getenv("HAMDECK_BUDGET_MS");
    if (raw == nullptr || *raw == '\0') return {};
    char* end = nullptr;
    const long long ms = std::strtoll(raw, &end, 10);
    if (end == raw || ms <= 0) return {};
    return Deadline(std::chrono::milliseconds(ms));
  }

  [[nodiscard]] bool unlimited() const { return !end_.has_value(); }
  [[nodiscard]] bool expired() const { return end_ && Clock::now() >= *end_; }

  void check(const std::string& stage) const {
    if (expired()) fail(ErrorKind::kBudgetExhausted, stage + ": wall-clock budget exhausted");
  }

 private:
  std::optional<Clock::time_point> end_;
};

}  // namespace hamdeck
