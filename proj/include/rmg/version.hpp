#pragma once

namespace rmg {
inline constexpr const char* kVersion = "0.1.0";
}
