#pragma once

#include <string>

namespace mch {

// 17 significant digits; enough to round-trip any double through text.
std::string format_double(double x);

// Shortest representation that parses back to the same double.
std::string format_shortest(double x);

}  // namespace mch
