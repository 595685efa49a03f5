#pragma once

#define FOURIERFIT_VERSION "0.1.0"

namespace fourierfit {

inline constexpr const char* kVersion = FOURIERFIT_VERSION;

}  // namespace fourierfit
