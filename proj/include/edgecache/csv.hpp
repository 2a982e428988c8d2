#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace edgecache::csv {

/// Splits a line on commas. No quoting; none of our schemas need it.
std::vector<std::string_view> split(std::string_view line);

/// Shortest decimal form that parses back to the same double.
std::string format(double value);

// Strict parsers: the whole field must be consumed. Return false on failure.
bool parse(std::string_view field, double& out);
bool parse(std::string_view field, std::int64_t& out);
bool parse(std::string_view field, int& out);

std::string_view trim(std::string_view s);

}  // namespace edgecache::csv
