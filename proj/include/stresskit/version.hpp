#pragma once

namespace stresskit {

inline constexpr const char* kAppName = "stresskit";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace stresskit
