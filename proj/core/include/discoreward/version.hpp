#pragma once

namespace discoreward {
inline constexpr const char* kVersion = "1.0.0";
}
