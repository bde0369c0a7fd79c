#pragma once

#include <string_view>

namespace roguegym {
inline constexpr std::string_view kVersion = "0.1.0";
}
