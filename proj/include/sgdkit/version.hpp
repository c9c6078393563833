#pragma once

namespace sgdkit {

inline constexpr const char* kToolName = "sgdkit";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace sgdkit
