#pragma once

namespace glwire {

inline constexpr const char* kToolVersion = "glwire 0.1.0";

}  // namespace glwire
