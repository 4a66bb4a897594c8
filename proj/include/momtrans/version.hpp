#pragma once

namespace momtrans {
inline constexpr const char* kVersion = "0.1.0";
}
