#pragma once

#include <cstdint>

namespace sdb {

using Int = std::int64_t;

/// Reduces v to the w-bit two's-complement range [-2^(w-1), 2^(w-1)-1].
inline Int wrap_int(Int v, int bitwidth) {
    const std::uint64_t mask = (bitwidth >= 64) ? ~0ull : ((1ull << bitwidth) - 1ull);
    std::uint64_t u = static_cast<std::uint64_t>(v) & mask;
    const std::uint64_t sign = 1ull << (bitwidth - 1);
    if (u & sign) u |= ~mask;
    return static_cast<Int>(u);
}

inline Int int_min_value(int bitwidth) { return -(Int{1} << (bitwidth - 1)); }
inline Int int_max_value(int bitwidth) { return (Int{1} << (bitwidth - 1)) - 1; }

/// Division truncating toward zero, with x/0 defined as 0.
inline Int div_total(Int a, Int b) { return b == 0 ? 0 : a / b; }

}  // namespace sdb
