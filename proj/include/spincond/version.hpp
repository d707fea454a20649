#pragma once

namespace spincond {
inline constexpr const char* kVersion = "0.1.0";
}
