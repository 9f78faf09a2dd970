#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <system_error>

namespace iotmm {

namespace detail {

inline std::string to_chars_double(double value, std::chars_format fmt, int precision) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value, fmt, precision);
  return std::string(buf, result.ptr);
}

}  // namespace detail

// Shortest decimal string that parses back to the identical double.
// Locale-independent by construction; this is the "full precision" rendering
// used in CSV reports and CLI output.
inline std::string format_full(double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

// Display renderings follow the significant figures used in the bundled case
// studies; the full-precision value always travels alongside them.

// Ratios and probabilities of compromise: two significant digits
// (0.045, 0.044, 0.0021).
inline std::string display_ratio(double value) {
  return detail::to_chars_double(value, std::chars_format::general, 2);
}

// Monetary amounts: cents for amounts of one unit or more, three significant
// digits below that so per-device values such as 0.0412 stay readable.
inline std::string display_money(double value) {
  if (value == 0.0) return "0.00";
  if (std::fabs(value) >= 1.0) {
    return detail::to_chars_double(value, std::chars_format::fixed, 2);
  }
  return detail::to_chars_double(value, std::chars_format::general, 3);
}

// Everything else (probabilities, scores, micromort rates): six significant
// digits, trailing zeros trimmed.
inline std::string display_generic(double value) {
  return detail::to_chars_double(value, std::chars_format::general, 6);
}

// RFC 4180 quoting; only applied when the field needs it.
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace iotmm
