#pragma once

namespace growthsde {

inline constexpr char const* kVersion = "0.1.0";

}  // namespace growthsde
