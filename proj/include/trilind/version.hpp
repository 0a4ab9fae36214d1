// version.hpp

#pragma once

#include <string_view>

namespace trilind {

inline constexpr std::string_view kVersion = "0.1.0";

} // namespace trilind
