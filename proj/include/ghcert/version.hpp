#pragma once

namespace ghcert {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ghcert
