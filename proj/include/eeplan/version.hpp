#pragma once

namespace eeplan {
inline constexpr const char* kVersion = "0.1.0";
}
