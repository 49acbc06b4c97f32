#pragma once

namespace qcsched {

inline constexpr const char* kVersion = "qcsched 0.1.0";

}  // namespace qcsched
