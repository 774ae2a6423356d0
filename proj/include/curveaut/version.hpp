#pragma once

namespace curveaut {

inline constexpr const char* kVersion = "1.0.0";

} // namespace curveaut
