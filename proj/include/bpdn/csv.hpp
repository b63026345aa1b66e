// Minimal RFC 4180 reading and writing.

#ifndef BPDN_CSV_HPP
#define BPDN_CSV_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bpdn::csv {

using Row = std::vector<std::string>;

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& os, const Row& row);

/// 17 significant digits, so the text reads back as the same double.
std::string format_number(double value);

struct ParseError : std::runtime_error {
  ParseError(std::size_t row, const std::string& msg)
      : std::runtime_error("row " + std::to_string(row) + ": " + msg), row(row) {}
  std::size_t row;  // 1-based, header is row 1
};

/// Parses a whole document. Rows end with LF or CRLF; quoted fields may
/// span lines. Throws ParseError on unbalanced quotes.
std::vector<Row> parse(std::string_view text);

double parse_number(const std::string& field, std::size_t row);
long parse_integer(const std::string& field, std::size_t row);

}  // namespace bpdn::csv

#endif  // BPDN_CSV_HPP
