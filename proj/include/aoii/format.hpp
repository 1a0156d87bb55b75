#pragma once

#include <cstdio>
#include <string>

namespace aoii {

// Shortest round-trippable decimal form of a double (17 significant
// digits), used for every number written to CSV or JSON output.
inline std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace aoii
