#pragma once

namespace rnf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rnf
