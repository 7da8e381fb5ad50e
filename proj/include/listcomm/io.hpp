#pragma once

// Small text I/O helpers shared by the file formats.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace listcomm::io {

// Reads a whole file. Throws ParseError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Writes a whole file, creating parent directories. Throws ValidationError on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

// Splits on '\n'; a trailing '\r' is stripped from each line. A final empty
// segment after the last newline is not returned.
std::vector<std::string_view> split_lines(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep);

bool is_valid_utf8(std::string_view text) noexcept;

// Fixed-point formatting independent of the global locale.
std::string format_fixed(double value, int decimals);

// Rounds to the nearest multiple of 10^-6; stable under format_fixed(…, 6) + parse.
double quantize6(double value) noexcept;

// Parses a decimal number, rejecting trailing garbage.
bool parse_double(std::string_view text, double& out) noexcept;
bool parse_uint(std::string_view text, unsigned long long& out) noexcept;

} // namespace listcomm::io
