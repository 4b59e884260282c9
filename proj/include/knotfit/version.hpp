#pragma once

namespace knotfit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace knotfit
