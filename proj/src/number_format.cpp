#include "csrkn/number_format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace csrkn {

namespace {

std::string finite_or_name(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  return value > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_17g(double value) {
  if (!std::isfinite(value)) {
    return finite_or_name(value);
  }
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return {buf.data(), res.ptr};
}

std::string format_shortest(double value) {
  if (!std::isfinite(value)) {
    return finite_or_name(value);
  }
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), res.ptr};
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (first != last && *first == '+') {
    ++first;
  }
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace csrkn
