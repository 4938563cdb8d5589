#pragma once

namespace fas {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fas
