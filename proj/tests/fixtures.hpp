#pragma once

#include "locinv/map.hpp"

namespace fixtures {

// Three-bit map with a fixed point, a 4-cycle, and two garden-of-eden points.
inline constexpr const char* kThreeBit =
    "n=3\n"
    "y1 = x1 + x2*x3 + x1*x2*x3\n"
    "y2 = x1 + x2\n"
    "y3 = x2 + x1*x3\n";

inline locinv::PolyMap three_bit() { return locinv::parse_map(kThreeBit); }

inline locinv::Point pt(const char* bits) { return locinv::Point::parse(bits); }

}  // namespace fixtures
