#include "drgrade/common/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string_view>

namespace drg::logging {

namespace {

Level parse_level(const char* s) {
    if (s == nullptr) return Level::warn;
    std::string_view v(s);
    if (v == "error") return Level::error;
    if (v == "warn") return Level::warn;
    if (v == "info") return Level::info;
    if (v == "debug") return Level::debug;
    return Level::warn;
}

const char* level_tag(Level level) {
    switch (level) {
    case Level::error: return "error";
    case Level::warn: return "warn";
    case Level::info: return "info";
    case Level::debug: return "debug";
    }
    return "?";
}

std::mutex g_mutex;

} // namespace

Level threshold() {
    static Level cached = parse_level(std::getenv("DRGRADE_LOG"));
    return cached;
}

void log(Level level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(threshold())) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::cerr << "[" << level_tag(level) << "] " << msg << "\n";
}

} // namespace drg::logging
