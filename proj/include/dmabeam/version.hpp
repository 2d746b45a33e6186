#pragma once

namespace dmabeam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dmabeam
