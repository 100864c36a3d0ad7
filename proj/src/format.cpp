#include "powermix/format.hpp"

#include <charconv>
#include <cmath>

namespace powermix {

namespace {

std::string special(double x) {
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

std::string shortest(double x) {
    if (!std::isfinite(x)) return special(x);
    if (x == 0.0) return std::signbit(x) ? "-0" : "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string digits17(double x) {
    if (!std::isfinite(x)) return special(x);
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace powermix
