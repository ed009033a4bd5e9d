#pragma once

namespace pathinf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pathinf
