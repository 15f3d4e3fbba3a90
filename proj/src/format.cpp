#include "dpde/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace dpde {

std::string format_shortest(double value) {
    if (value == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_sig6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string format_spacing(double value) {
    if (value > 0.0 && value < 1.0) {
        const double inv = 1.0 / value;
        const double n = std::round(inv);
        if (n >= 2.0 && std::abs(inv - n) <= 1e-9 * n) {
            return "1/" + std::to_string(static_cast<long long>(n));
        }
    }
    return format_shortest(value);
}

}  // namespace dpde
