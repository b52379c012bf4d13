#pragma once

namespace pptes {

inline constexpr const char* kToolName = "pptes";
inline constexpr const char* kToolVersion = "0.1.0";

inline const char* tool_id() { return "pptes 0.1.0"; }

}  // namespace pptes
