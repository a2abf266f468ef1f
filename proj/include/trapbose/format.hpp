#pragma once

#include <cstdio>
#include <string>

namespace trapbose {

// Shortest round-trippable decimal form, identical across runs: %.17g with
// trailing zeros kept as printf produces them.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace trapbose
