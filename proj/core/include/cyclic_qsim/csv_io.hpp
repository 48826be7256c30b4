#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cqsim {

/// Shortest round-trip decimal form of a double ("nan"/"inf" spelled out).
std::string format_double(double value);

/// Reads a comma-separated numeric table with exactly `columns` fields per row.
/// Blank lines and lines starting with '#' are skipped; a non-numeric first
/// row is treated as a header. Throws ParameterError on malformed content.
std::vector<std::vector<double>> read_numeric_table(std::istream& in, std::size_t columns);
std::vector<std::vector<double>> read_numeric_table(const std::filesystem::path& path, std::size_t columns);

}  // namespace cqsim
