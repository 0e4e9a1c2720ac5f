#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace reca::detail {

// Shortest round-trip decimal form.
inline std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace reca::detail
