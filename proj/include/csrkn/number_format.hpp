#pragma once

#include <string>
#include <string_view>

namespace csrkn {

/// 17 significant digits; round-trips every double.
std::string format_17g(double value);

/// Shortest decimal string that round-trips.
std::string format_shortest(double value);

/// Parses a full decimal string; throws std::invalid_argument on junk.
double parse_double(std::string_view text);

}  // namespace csrkn
