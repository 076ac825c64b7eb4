#pragma once

namespace quartersim {
inline constexpr const char* kVersion = "0.1.0";
}
