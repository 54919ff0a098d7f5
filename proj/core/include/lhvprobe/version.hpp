#pragma once

namespace lhvprobe {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lhvprobe
