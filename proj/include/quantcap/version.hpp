#pragma once

namespace quantcap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace quantcap
