#pragma once

#include <cstdio>
#include <string>

namespace fracshadow {

/// 17 significant digits: enough for any double to survive a text round trip.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace fracshadow
