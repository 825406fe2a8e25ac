#pragma once

namespace gramdet {
inline constexpr const char* kVersion = "0.1.0";
}
