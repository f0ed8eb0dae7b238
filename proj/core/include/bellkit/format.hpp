// Locale-independent number formatting and file output shared by the CSV and
// JSON writers.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace bellkit {

// Shortest general-format rendering with 9 significant digits, '.' decimal
// separator regardless of the global locale.
std::string format_number(double value);
std::string format_number(std::int64_t value);

// Parses a full token as a double; throws InputError naming `what` otherwise.
double parse_number(std::string_view text, std::string_view what);
std::int64_t parse_integer(std::string_view text, std::string_view what);

// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace bellkit
