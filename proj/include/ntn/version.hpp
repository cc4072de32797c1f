#pragma once

namespace ntn {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace ntn
