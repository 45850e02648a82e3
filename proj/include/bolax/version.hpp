#pragma once

namespace bolax {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bolax
