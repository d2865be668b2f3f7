#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace tamed {

// Shortest decimal that parses back to the same double; "inf", "-inf" and
// "nan" for the non-finite values.
inline std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace tamed
