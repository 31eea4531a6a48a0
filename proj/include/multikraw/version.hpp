#pragma once

namespace multikraw {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace multikraw
