#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace simfdr::csv {

// Shortest round-trip decimal form; NaN renders as "nan".
std::string format_double(double x);

// Quote per RFC 4180 when the field contains a comma, quote, or newline.
std::string format_field(const std::string& field);

// One record terminated by CRLF.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based line number of each data row in the source file.
    std::vector<std::size_t> line_numbers;
};

// RFC 4180 reader (quoted fields, escaped quotes, CR LF or LF). The first
// record is the header; every row must have the same width. Throws DataError
// with a 1-based line number on malformed input.
Table read(std::istream& in, const std::string& source_name);

// Field-level numeric parsing with location-tagged errors.
double parse_double_field(const std::string& field, const std::string& what,
                          std::size_t line, const std::string& source_name);

} // namespace simfdr::csv
