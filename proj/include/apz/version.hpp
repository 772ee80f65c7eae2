#pragma once

namespace apz {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace apz
