#pragma once

namespace lucheck {

inline constexpr const char* kToolName = "lucheck";
inline constexpr const char* kVersionString = "0.1.0";

}  // namespace lucheck
