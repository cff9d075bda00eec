#pragma once

namespace bankucb {
inline constexpr const char* kVersion = "0.1.0";
}
