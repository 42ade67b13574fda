#pragma once

#include <string>

namespace drg::logging {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

// Threshold comes from the DRGRADE_LOG env var (error|warn|info|debug), default warn.
Level threshold();
void log(Level level, const std::string& msg);

inline void error(const std::string& msg) { log(Level::error, msg); }
inline void warn(const std::string& msg) { log(Level::warn, msg); }
inline void info(const std::string& msg) { log(Level::info, msg); }
inline void debug(const std::string& msg) { log(Level::debug, msg); }

} // namespace drg::logging
