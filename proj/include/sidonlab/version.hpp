#pragma once

namespace sidonlab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sidonlab
