// log.hpp — stderr diagnostics gated by the TRILIND_LOG environment variable

#pragma once

#include <string>

namespace trilind::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

// Current threshold; taken from TRILIND_LOG (error|warn|info|debug) on first
// use, defaulting to warn. Unknown values fall back to warn.
Level level();

void message(Level lvl, const std::string& text);

inline void error(const std::string& text) { message(Level::error, text); }
inline void warn(const std::string& text) { message(Level::warn, text); }
inline void info(const std::string& text) { message(Level::info, text); }
inline void debug(const std::string& text) { message(Level::debug, text); }

} // namespace trilind::log
