#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace aqil {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// Strict full-string parse. Throws std::invalid_argument on junk.
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

}  // namespace aqil
