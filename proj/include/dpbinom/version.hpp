#pragma once

namespace dpbinom {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dpbinom
