#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace signalcast::text {

std::vector<std::string_view> split(std::string_view line, char delim);
std::string_view trim(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);
/// Fixed 17 significant digits ("%.17g").
std::string format_double17(double v);

/// Strict parse of the whole field; throws Error(kInput) with `context`.
double parse_double(std::string_view s, std::string_view context);
long long parse_int(std::string_view s, std::string_view context);
bool parse_bool(std::string_view s, std::string_view context);

}  // namespace signalcast::text
