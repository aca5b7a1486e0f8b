#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ambiq {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Fixed notation with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Strict parse of a whole string as a double (InvalidArgument otherwise).
double parse_double(std::string_view text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace ambiq
