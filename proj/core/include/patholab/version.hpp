#pragma once

namespace patholab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace patholab
