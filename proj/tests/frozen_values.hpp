#pragma once

// P(n) and Q(n) for 0 <= n <= 40, computed once by an exhaustive search
// written separately from the library and frozen here.

#include <array>
#include <cstdint>

namespace frozen {

inline constexpr std::array<std::uint32_t, 41> kSmallP = {
    0, 1, 2, 2, 4, 5, 3, 6, 7, 6, 4, 8, 8, 9, 7, 5, 10, 11, 9, 10, 8,
    6, 11, 12, 13, 10, 11, 9, 7, 14, 12, 13, 14, 11, 12, 10, 8, 16, 16, 13, 14};

inline constexpr std::array<std::uint32_t, 41> kSmallQ = {
    0, 2, 4, 3, 6, 5, 4, 7, 7, 6, 5, 10, 8, 8, 7, 6, 12, 11, 9, 9, 8,
    7, 11, 13, 12, 10, 10, 9, 8, 15, 12, 14, 13, 11, 11, 10, 9, 17, 16, 13, 15};

}  // namespace frozen
