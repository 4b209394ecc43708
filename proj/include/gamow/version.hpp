#pragma once

namespace gamow {

inline constexpr const char* version = "0.1.0";

}  // namespace gamow
