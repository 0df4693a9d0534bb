#pragma once

namespace transval {
inline constexpr const char* kVersion = "0.1.0";
}
