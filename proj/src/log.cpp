// log.cpp — TRILIND_LOG parsing and stderr output

#include "trilind/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace trilind::log {

namespace {

Level parse_env() {
    const char* raw = std::getenv("TRILIND_LOG");
    if (raw == nullptr) return Level::warn;
    const std::string v(raw);
    if (v == "error") return Level::error;
    if (v == "warn") return Level::warn;
    if (v == "info") return Level::info;
    if (v == "debug") return Level::debug;
    return Level::warn;
}

const char* tag(Level lvl) {
    switch (lvl) {
        case Level::error: return "error";
        case Level::warn: return "warn";
        case Level::info: return "info";
        case Level::debug: return "debug";
    }
    return "?";
}

std::mutex io_mutex;

} // namespace

Level level() {
    static const Level lvl = parse_env();
    return lvl;
}

void message(Level lvl, const std::string& text) {
    if (static_cast<int>(lvl) > static_cast<int>(level())) return;
    std::lock_guard<std::mutex> lock(io_mutex);
    std::cerr << "[trilind] " << tag(lvl) << ": " << text << "\n";
}

} // namespace trilind::log
