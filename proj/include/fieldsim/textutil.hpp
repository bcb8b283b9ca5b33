#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fieldsim::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Lower-cases and collapses every whitespace run to a single space.
std::string normalize(std::string_view s);

bool contains_ci(std::string_view haystack, std::string_view needle);

std::vector<std::string> split_lines(std::string_view s);

/// Replaces every occurrence of `token` in `tmpl`.
std::string substitute(std::string tmpl, std::string_view token, std::string_view value);

bool contains_digit(std::string_view s);

/// Digit or spelled-out number word ("twenty", "percent", ...), the trigger
/// for sending a conclusion through dequantification.
bool mentions_quantity(std::string_view s);

}  // namespace fieldsim::text
