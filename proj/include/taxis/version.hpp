#pragma once

namespace taxis {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace taxis
