// Diagnostics on stderr, gated by the CORRFUSE_LOG environment variable
// (unset: silent, "info": info, "debug": info + debug).
#pragma once

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string_view>

namespace corrfuse {

enum class LogLevel { kSilent = 0, kInfo = 1, kDebug = 2 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("CORRFUSE_LOG");
    if (env == nullptr) return LogLevel::kSilent;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    if (std::strcmp(env, "info") == 0) return LogLevel::kInfo;
    return LogLevel::kSilent;
  }();
  return level;
}

inline void log_info(std::string_view msg) {
  if (log_level() >= LogLevel::kInfo) std::cerr << "[corrfuse] " << msg << "\n";
}

inline void log_debug(std::string_view msg) {
  if (log_level() >= LogLevel::kDebug) std::cerr << "[corrfuse:debug] " << msg << "\n";
}

}  // namespace corrfuse
