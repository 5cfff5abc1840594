#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace staleperc {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_real(double value);

/// Parses a real written by format_real (or any decimal/`nan`/`inf`).
/// Throws IoError on malformed input.
double parse_real(std::string_view text);

long long parse_integer(std::string_view text);

/// Splits on any run of whitespace.
std::vector<std::string> split_whitespace(std::string_view line);

/// Splits on a single delimiter, trimming whitespace around each field.
std::vector<std::string> split_trimmed(std::string_view text, char delimiter);

std::string trim(std::string_view text);

/// Minimal CSV writer: comma-separated, no quoting (fields never contain commas).
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& columns);
  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(long long value);
  CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
  CsvWriter& field(std::size_t value) { return field(static_cast<long long>(value)); }
  void end_row();

 private:
  std::ostream& out_;
  bool first_ = true;
};

}  // namespace staleperc
