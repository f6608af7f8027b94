#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace edrought::detail {

// Fixed-point formatting for CSV output; NaN prints "nan" and negative zero
// prints without a sign so byte output never depends on rounding noise sign.
inline std::string fixed(double v, int precision) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

// As fixed() but with an explicit '+' on positive values; zero prints unsigned.
inline std::string signed_fixed(double v, int precision) {
  std::string s = fixed(v, precision);
  if (s == "nan" || s.front() == '-' || s.find_first_not_of("0.") == std::string::npos) return s;
  return "+" + s;
}

// Shortest representation that parses back to the same double.
inline std::string exact(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace edrought::detail
