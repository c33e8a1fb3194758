#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace chromopt {

/// Formats a double with 12 significant digits (the precision used by every
/// text, CSV, and JSON emitter in this project).
inline std::string format_sig12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Rounds a double to 12 significant digits. Serialized numbers are passed
/// through this so that emitted JSON is byte-stable across platforms.
inline double round_sig12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

}  // namespace chromopt
