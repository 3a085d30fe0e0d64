#pragma once

namespace cachemix {

inline constexpr const char* version = "0.1.0";

} // namespace cachemix
