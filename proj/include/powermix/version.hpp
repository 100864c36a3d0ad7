#pragma once

namespace powermix {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace powermix
