#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tempdyn {

// Splits one CSV line on commas. No quoting support: the file formats used
// here never contain embedded commas.
std::vector<std::string> split_csv_line(const std::string& line);

// Shortest representation that round-trips exactly through parse_double.
std::string format_double(double v);

// Strict double parse of a full field. Throws validation_error with `context`
// in the message on failure.
double parse_double(const std::string& field, const std::string& context);

std::optional<double> parse_optional_double(const std::string& field, const std::string& context);

// Reads a whole text file; throws io_error if unreadable.
std::string read_text_file(const std::filesystem::path& path);

// Writes via a temporary file in the same directory followed by an atomic
// rename, so a crash never leaves a half-written artifact behind.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace tempdyn
