#pragma once

// Small UTF-8 helpers. Case mapping covers ASCII and the Latin-1/Latin
// Extended-A letters used by the shipped locales; other code points are
// left untouched.

#include <string>
#include <string_view>

namespace gramtrans::text {

std::string to_upper_first(std::string_view s);
std::string to_lower_first(std::string_view s);
std::string to_lower(std::string_view s);

// Case-insensitive equality under the same mapping.
bool equal_ignoring_case(std::string_view a, std::string_view b);

// Collapses whitespace runs to one space and trims both ends.
std::string collapse_whitespace(std::string_view s);

// Number of code points; invalid bytes count as one each.
std::size_t code_points(std::string_view s);

}  // namespace gramtrans::text
