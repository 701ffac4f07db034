#pragma once

namespace percolab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace percolab
