#ifndef CDOXAI_CSV_H_
#define CDOXAI_CSV_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdoxai::csv {

// Splits one comma-separated line. No quoting: fields may not contain commas.
std::vector<std::string_view> SplitLine(std::string_view line);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);

std::optional<double> ParseDouble(std::string_view text);
std::optional<std::int64_t> ParseInt(std::string_view text);

// Reads the next data line, skipping blank lines and `#` comment lines.
// `line_number` tracks the 1-based physical line of the returned text.
bool NextDataLine(std::istream& in, std::string& line,
                  std::size_t& line_number);

// Maps header column names to their positions; returns the index of `name`
// or nullopt.
std::optional<std::size_t> FindColumn(const std::vector<std::string_view>& header,
                                      std::string_view name);

std::string Trim(std::string_view text);

}  // namespace cdoxai::csv

#endif  // CDOXAI_CSV_H_
