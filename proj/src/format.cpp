#include "mch/format.hpp"

#include <charconv>
#include <cstdio>

namespace mch {

std::string format_double(double x) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(n));
}

std::string format_shortest(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace mch
