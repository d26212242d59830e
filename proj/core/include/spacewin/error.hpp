#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spacewin {

enum class ErrorCode {
  NegativeRadius,
  SameClusterPickupDropoff,
  EmptyArea,
  DuplicateEvent,
  MissingEvent,
  UnknownEvent,
  NonPositiveSpeed,
  InvalidRequestIds,
  RequestOrder,
  WalkDominates,
  InvalidConfig,
  ParseError,
  InfeasiblePattern,
  InconsistentTimings,
  NonConvergence,
  GridTooLarge,
  FrozenPointConflict,
  ProblemTooLarge,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Issue {
  ErrorCode code;
  std::string message;
};

// Thrown by scenario validation; carries every violation found, not just the
// first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const noexcept { return issues_; }
  bool has(ErrorCode code) const;

 private:
  std::vector<Issue> issues_;
};

}  // namespace spacewin
