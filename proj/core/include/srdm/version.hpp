#pragma once

namespace srdm {

inline constexpr const char* kToolkitVersion = "1.0.0";

}  // namespace srdm
