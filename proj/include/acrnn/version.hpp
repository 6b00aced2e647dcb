#pragma once

namespace acrnn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace acrnn
