#pragma once

#include <memory>

#include <spdlog/logger.h>

namespace spacewin::log {

// Shared library logger. The level comes from the SW_LOG environment variable
// (trace, debug, info, warn, error, off); the default is warn.
std::shared_ptr<spdlog::logger> logger();

}  // namespace spacewin::log
