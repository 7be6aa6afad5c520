#pragma once

namespace cpt {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace cpt
