#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpx::csv {

std::vector<std::string_view> split(std::string_view line, char sep = ',');

/// Strips one trailing '\r'.
std::string_view chomp(std::string_view line);

std::optional<std::int64_t> to_int(std::string_view field);
std::optional<double> to_double(std::string_view field);

/// Shortest round-trip representation; NaN becomes an empty field.
std::string fmt(double value);

std::ofstream open_out(const std::string& path);
std::ifstream open_in(const std::string& path);

}  // namespace fpx::csv
