#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bhlab {

using Bit = std::uint8_t;
using BitString = std::vector<Bit>;
using BitView = std::span<const Bit>;

// Input alphabet {0, 1, 2}; 2 marks a guardian.
using Symbol = std::uint8_t;
inline constexpr Symbol kGuardian = 2;

}  // namespace bhlab
