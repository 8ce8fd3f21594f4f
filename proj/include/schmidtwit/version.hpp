#pragma once

namespace schmidtwit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace schmidtwit
