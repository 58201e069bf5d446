#pragma once

namespace randbeta {

inline constexpr const char* kToolName = "randbeta";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace randbeta
