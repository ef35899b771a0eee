#pragma once

namespace degeneig {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace degeneig
