#pragma once

namespace rejgate {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace rejgate
