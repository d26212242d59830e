#include "spacewin/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "spacewin/error.hpp"

namespace spacewin {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeRadius: return "NegativeRadius";
    case ErrorCode::SameClusterPickupDropoff: return "SameClusterPickupDropoff";
    case ErrorCode::EmptyArea: return "EmptyArea";
    case ErrorCode::DuplicateEvent: return "DuplicateEvent";
    case ErrorCode::MissingEvent: return "MissingEvent";
    case ErrorCode::UnknownEvent: return "UnknownEvent";
    case ErrorCode::NonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::InvalidRequestIds: return "InvalidRequestIds";
    case ErrorCode::RequestOrder: return "RequestOrder";
    case ErrorCode::WalkDominates: return "WalkDominates";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InfeasiblePattern: return "InfeasiblePattern";
    case ErrorCode::InconsistentTimings: return "InconsistentTimings";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::FrozenPointConflict: return "FrozenPointConflict";
    case ErrorCode::ProblemTooLarge: return "ProblemTooLarge";
  }
  return "Unknown";
}

namespace {

std::string join_issues(const std::vector<Issue>& issues) {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) {
      out += "; ";
    }
    out += std::string(to_string(issue.code)) + ": " + issue.message;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
  : Error(issues.empty() ? ErrorCode::InvalidConfig : issues.front().code,
          join_issues(issues)),
    issues_(std::move(issues)) {}

bool ValidationError::has(ErrorCode code) const {
  for (const auto& issue : issues_) {
    if (issue.code == code) {
      return true;
    }
  }
  return false;
}

namespace log {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto lg = spdlog::stderr_color_mt("spacewin");
    lg->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("SW_LOG")) {
      lg->set_level(spdlog::level::from_str(env));
    }
    return lg;
  }();
  return instance;
}

}  // namespace log
}  // namespace spacewin
